// SPDX-License-Identifier: Apache-2.0
//
// 1-bit reconfigurable surface: binary element states and a frequency
// dependent reflection coefficient per state.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rislab {

using cdouble = std::complex<double>;

/// Binary state vector of one surface. Entries are always exactly 0 or 1.
class RisConfig {
public:
  RisConfig() = default;
  explicit RisConfig(std::size_t n_elements);  // all zeros
  explicit RisConfig(std::vector<std::uint8_t> states);

  std::size_t size() const { return states_.size(); }
  std::uint8_t operator[](std::size_t i) const { return states_[i]; }
  const std::vector<std::uint8_t>& states() const { return states_; }

  std::size_t count_ones() const;
  std::size_t hamming_distance(const RisConfig& other) const;

  /// "0110..." with element 0 first.
  std::string bitstring() const;
  static RisConfig from_bitstring(const std::string& bits);

  /// Stable 64-bit FNV-1a hash of the bitstring, rendered as 16 hex digits.
  std::string hash_hex() const;

  friend bool operator==(const RisConfig&, const RisConfig&) = default;

private:
  std::vector<std::uint8_t> states_;
};

/// Lorentzian phase-contrast element model. State 0 is the phase reference
/// (zero phase at every frequency); state 1 is rotated by pi * L(f) with
/// L(f) = 1 / (1 + ((f - f0) / B)^2). Both states share the same magnitude.
struct ElementResponseModel {
  double resonance_freq_hz = 5.2e9;
  double bandwidth_hz = 150e6;
  double reflection_magnitude = 0.9;

  void validate() const;  // throws std::invalid_argument
};

struct RisSurface {
  std::size_t n_elements = 76;
  ElementResponseModel response{};
  std::string label = "ris";

  void validate() const;
};

/// L(f) in (0, 1], equal to 1 at resonance.
double resonance_profile(const ElementResponseModel& model, double freq_hz);

/// phi_1(f) - phi_0(f) in radians.
double phase_contrast(const ElementResponseModel& model, double freq_hz);

/// Complex reflection coefficient of one element in `state` at `freq_hz`.
/// Throws std::invalid_argument for non-positive frequency or a state other than 0/1.
cdouble reflection_coefficient(const ElementResponseModel& model, std::uint8_t state,
                               double freq_hz);

/// Copy of `config` with element `index` toggled.
RisConfig flip_element(const RisConfig& config, std::size_t index);

/// Uniform i.i.d. states, deterministic in `seed`.
RisConfig random_config(std::size_t n_elements, std::uint64_t seed);

}  // namespace rislab
