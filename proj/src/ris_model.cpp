// SPDX-License-Identifier: Apache-2.0
#include "rislab/ris_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rislab {

RisConfig::RisConfig(std::size_t n_elements) : states_(n_elements, 0) {}

RisConfig::RisConfig(std::vector<std::uint8_t> states) : states_(std::move(states))
{
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] > 1)
      throw std::invalid_argument("RisConfig: element " + std::to_string(i) +
                                  " has state " + std::to_string(states_[i]) + ", expected 0 or 1");
  }
}

std::size_t RisConfig::count_ones() const
{
  return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), std::uint8_t{1}));
}

std::size_t RisConfig::hamming_distance(const RisConfig& other) const
{
  if (other.size() != size())
    throw std::invalid_argument("RisConfig::hamming_distance: size mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < size(); ++i) d += states_[i] != other.states_[i];
  return d;
}

std::string RisConfig::bitstring() const
{
  std::string s(states_.size(), '0');
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i]) s[i] = '1';
  return s;
}

RisConfig RisConfig::from_bitstring(const std::string& bits)
{
  std::vector<std::uint8_t> states(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("RisConfig::from_bitstring: invalid character at " +
                                  std::to_string(i));
    states[i] = bits[i] == '1';
  }
  return RisConfig(std::move(states));
}

std::string RisConfig::hash_hex() const
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t s : states_) {
    h ^= static_cast<std::uint64_t>('0' + s);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ElementResponseModel::validate() const
{
  if (!(resonance_freq_hz > 0.0))
    throw std::invalid_argument("ElementResponseModel: resonance_freq_hz must be > 0");
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("ElementResponseModel: bandwidth_hz must be > 0");
  if (!(reflection_magnitude > 0.0 && reflection_magnitude <= 1.0))
    throw std::invalid_argument("ElementResponseModel: reflection_magnitude must be in (0, 1]");
}

void RisSurface::validate() const
{
  if (n_elements < 1) throw std::invalid_argument("RisSurface: n_elements must be >= 1");
  response.validate();
}

double resonance_profile(const ElementResponseModel& model, double freq_hz)
{
  if (!(freq_hz > 0.0)) throw std::invalid_argument("frequency must be > 0");
  const double x = (freq_hz - model.resonance_freq_hz) / model.bandwidth_hz;
  return 1.0 / (1.0 + x * x);
}

double phase_contrast(const ElementResponseModel& model, double freq_hz)
{
  return std::numbers::pi * resonance_profile(model, freq_hz);
}

cdouble reflection_coefficient(const ElementResponseModel& model, std::uint8_t state,
                               double freq_hz)
{
  if (!(freq_hz > 0.0))
    throw std::invalid_argument("reflection_coefficient: frequency must be > 0");
  switch (state) {
    case 0: return {model.reflection_magnitude, 0.0};
    case 1: return std::polar(model.reflection_magnitude, phase_contrast(model, freq_hz));
    default: throw std::invalid_argument("reflection_coefficient: state must be 0 or 1");
  }
}

RisConfig flip_element(const RisConfig& config, std::size_t index)
{
  if (index >= config.size())
    throw std::invalid_argument("flip_element: index " + std::to_string(index) +
                                " out of range for " + std::to_string(config.size()) +
                                " elements");
  std::vector<std::uint8_t> states = config.states();
  states[index] ^= 1U;
  return RisConfig(std::move(states));
}

RisConfig random_config(std::size_t n_elements, std::uint64_t seed)
{
  if (n_elements < 1) throw std::invalid_argument("random_config: n_elements must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> states(n_elements);
  for (auto& s : states) s = static_cast<std::uint8_t>(rng() >> 63);
  return RisConfig(std::move(states));
}

}  // namespace rislab
