// SPDX-License-Identifier: Apache-2.0
#include "rislab/channel.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "rislab/seeding.hpp"

namespace rislab {

const char* to_string(ScenarioKind kind)
{
  return kind == ScenarioKind::co_located ? "co_located" : "separated";
}

ScenarioKind scenario_kind_from_string(const std::string& s)
{
  if (s == "co_located") return ScenarioKind::co_located;
  if (s == "separated") return ScenarioKind::separated;
  throw std::invalid_argument("unknown scenario kind '" + s +
                              "' (expected co_located or separated)");
}

PathGainProfile default_profile(ScenarioKind kind, double own_rms)
{
  const double cross =
      kind == ScenarioKind::co_located ? own_rms : own_rms * std::pow(10.0, kSeparatedCrossRelDb / 20.0);
  return {{{own_rms, cross}, {cross, own_rms}}};
}

void Environment::validate() const
{
  for (const auto& s : surfaces) s.validate();
  if (!(link_freqs_hz[0] > 0.0))
    throw std::invalid_argument("Environment: link frequencies must be > 0");
  if (!(link_freqs_hz[1] > link_freqs_hz[0]))
    throw std::invalid_argument("Environment: link_freqs_hz must be strictly increasing");
  for (const auto& row : path_gain_profile)
    for (double p : row)
      if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("Environment: path_gain_profile entries must be finite and >= 0");
  if (!(direct_path_rel_db < 0.0))
    throw std::invalid_argument("Environment: direct_path_rel_db must be < 0");
}

double Environment::mean_cascade_power(std::size_t link) const
{
  double p = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    const double rho = surfaces[r].response.reflection_magnitude;
    const double rms = path_gain_profile[link][r];
    p += static_cast<double>(surfaces[r].n_elements) * rho * rho * rms * rms;
  }
  return p;
}

namespace {

cdouble complex_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& unit,
                         double variance)
{
  const double scale = std::sqrt(variance / 2.0);
  const double re = unit(rng);
  const double im = unit(rng);
  return {scale * re, scale * im};
}

void check_configs(const ConfigPair& configs, const Environment& env)
{
  for (std::size_t r = 0; r < 2; ++r) {
    if (configs[r].size() != env.surfaces[r].n_elements)
      throw std::invalid_argument("link_gain: config " + std::to_string(r) + " has " +
                                  std::to_string(configs[r].size()) + " elements, surface has " +
                                  std::to_string(env.surfaces[r].n_elements));
  }
}

cdouble surface_sum(const CascadeGains& g, const RisConfig& cfg, const cdouble gamma[2])
{
  cdouble acc{0.0, 0.0};
  for (std::size_t m = 0; m < cfg.size(); ++m) acc += g.incident[m] * gamma[cfg[m]] * g.departing[m];
  return acc;
}

}  // namespace

ChannelRealization draw_realization(const Environment& env)
{
  env.validate();
  std::mt19937_64 rng(derive_seed(env.seed, Stream::channel));
  std::normal_distribution<double> unit(0.0, 1.0);
  ChannelRealization real;
  for (std::size_t l = 0; l < kNumLinks; ++l) {
    for (std::size_t r = 0; r < 2; ++r) {
      // E|a|^2 = E|b|^2 = rms so that the product a*b has the profile's rms.
      const double var = env.path_gain_profile[l][r];
      auto& g = real.paths[l][r];
      const std::size_t n = env.surfaces[r].n_elements;
      g.incident.resize(n);
      g.departing.resize(n);
      for (std::size_t m = 0; m < n; ++m) {
        g.incident[m] = complex_gaussian(rng, unit, var);
        g.departing[m] = complex_gaussian(rng, unit, var);
      }
    }
  }
  for (std::size_t l = 0; l < kNumLinks; ++l) {
    const double var = std::pow(10.0, env.direct_path_rel_db / 10.0) * env.mean_cascade_power(l);
    real.direct[l] = complex_gaussian(rng, unit, var);
  }
  return real;
}

LinkChannel link_gain(const ChannelRealization& real, const ConfigPair& configs,
                      const Environment& env, std::size_t link)
{
  if (link >= kNumLinks) throw std::invalid_argument("link_gain: link index out of range");
  check_configs(configs, env);
  const double f = env.link_freqs_hz[link];
  cdouble h = real.direct[link];
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& g = real.paths[link][r];
    if (g.incident.size() != configs[r].size() || g.departing.size() != configs[r].size())
      throw std::invalid_argument("link_gain: realization does not match surface size");
    const cdouble gamma[2] = {reflection_coefficient(env.surfaces[r].response, 0, f),
                              reflection_coefficient(env.surfaces[r].response, 1, f)};
    h += surface_sum(g, configs[r], gamma);
  }
  return {h};
}

BestCase best_case_gain(const ChannelRealization& real, const Environment& env, std::size_t link,
                        std::size_t surface, const RisConfig& other_config)
{
  if (link >= kNumLinks || surface >= 2)
    throw std::invalid_argument("best_case_gain: index out of range");
  const std::size_t n = env.surfaces[surface].n_elements;
  if (n > kMaxBestCaseElements)
    throw std::invalid_argument("best_case_gain: refusing exhaustive search over " +
                                std::to_string(n) + " elements (limit " +
                                std::to_string(kMaxBestCaseElements) + ")");

  ConfigPair configs;
  configs[surface] = RisConfig(n);
  configs[1 - surface] = other_config;
  check_configs(configs, env);

  const double f = env.link_freqs_hz[link];
  const auto& resp = env.surfaces[surface].response;
  const cdouble delta = reflection_coefficient(resp, 1, f) - reflection_coefficient(resp, 0, f);
  const auto& g = real.paths[link][surface];
  std::vector<cdouble> step(n);
  for (std::size_t m = 0; m < n; ++m) step[m] = g.incident[m] * delta * g.departing[m];

  // Gray code walk starting from all-zeros.
  std::vector<std::uint8_t> states(n, 0);
  cdouble h = link_gain(real, configs, env, link).gain;
  double best = std::abs(h);
  std::uint64_t best_code = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto m = static_cast<std::size_t>(std::countr_zero(i));
    h += states[m] ? -step[m] : step[m];
    states[m] ^= 1U;
    const double mag = std::abs(h);
    if (mag > best) {
      best = mag;
      best_code = i ^ (i >> 1);
    }
  }

  std::vector<std::uint8_t> best_states(n);
  for (std::size_t m = 0; m < n; ++m) best_states[m] = (best_code >> m) & 1U;
  configs[surface] = RisConfig(std::move(best_states));
  // Report the canonical evaluation so callers comparing against link_gain
  // see identical bits rather than the accumulated incremental sum.
  return {std::abs(link_gain(real, configs, env, link).gain), configs[surface]};
}

nlohmann::json realization_to_json(const ChannelRealization& real)
{
  auto cvec = [](const std::vector<cdouble>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& z : v) out.push_back({z.real(), z.imag()});
    return out;
  };
  nlohmann::json j;
  for (std::size_t l = 0; l < kNumLinks; ++l) {
    nlohmann::json link;
    link["direct"] = {real.direct[l].real(), real.direct[l].imag()};
    for (std::size_t r = 0; r < 2; ++r) {
      link["surfaces"].push_back(
          {{"incident", cvec(real.paths[l][r].incident)}, {"departing", cvec(real.paths[l][r].departing)}});
    }
    j["links"].push_back(link);
  }
  return j;
}

ChannelRealization realization_from_json(const nlohmann::json& j)
{
  auto cvec = [](const nlohmann::json& a) {
    std::vector<cdouble> out;
    for (const auto& z : a) out.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    return out;
  };
  ChannelRealization real;
  const auto& links = j.at("links");
  if (links.size() != kNumLinks) throw std::invalid_argument("realization snapshot: expected 2 links");
  for (std::size_t l = 0; l < kNumLinks; ++l) {
    const auto& d = links[l].at("direct");
    real.direct[l] = {d.at(0).get<double>(), d.at(1).get<double>()};
    const auto& surfaces = links[l].at("surfaces");
    for (std::size_t r = 0; r < 2; ++r) {
      real.paths[l][r].incident = cvec(surfaces.at(r).at("incident"));
      real.paths[l][r].departing = cvec(surfaces.at(r).at("departing"));
    }
  }
  return real;
}

}  // namespace rislab
