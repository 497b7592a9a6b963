// SPDX-License-Identifier: Apache-2.0
//
// Flat-fading link gains for two links sharing two surfaces. Each link sees
// a weak direct path plus the cascaded Tx -> surface -> Rx sum through BOTH
// surfaces; the cross terms are how one operator's configuration leaks into
// the other operator's link.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "rislab/ris_model.hpp"

namespace rislab {

inline constexpr std::size_t kNumLinks = 2;

enum class ScenarioKind { co_located, separated };

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// path_gain_profile[link][surface]: rms amplitude of one element's
/// incident*departing product.
using PathGainProfile = std::array<std::array<double, 2>, kNumLinks>;

/// Cross-surface amplitude offset used by the separated placement, in dB
/// below the own-surface rms.
inline constexpr double kSeparatedCrossRelDb = -10.0;

/// Own rms on the diagonal; cross terms equal (co_located) or 10 dB below
/// (separated).
PathGainProfile default_profile(ScenarioKind kind, double own_rms);

struct Environment {
  std::uint64_t seed = 0;
  std::array<RisSurface, 2> surfaces{};
  std::array<double, kNumLinks> link_freqs_hz{5.1e9, 5.2e9};
  PathGainProfile path_gain_profile = default_profile(ScenarioKind::co_located, 0.125);
  double direct_path_rel_db = -20.0;
  ScenarioKind scenario_kind = ScenarioKind::co_located;

  void validate() const;  // throws std::invalid_argument

  /// E|sum of cascaded terms|^2 for `link` under a uniformly random configuration.
  double mean_cascade_power(std::size_t link) const;
};

struct CascadeGains {
  std::vector<cdouble> incident;   // a[m]
  std::vector<cdouble> departing;  // b[m]
};

/// Static indoor channel: drawn once per experiment and never mutated.
struct ChannelRealization {
  std::array<std::array<CascadeGains, 2>, kNumLinks> paths;  // [link][surface]
  std::array<cdouble, kNumLinks> direct{};
};

struct LinkChannel {
  cdouble gain{1.0, 0.0};
};

using ConfigPair = std::array<RisConfig, 2>;

ChannelRealization draw_realization(const Environment& env);

/// d[l] + sum_r sum_m a[l][r][m] * Gamma(state_rm, f_l) * b[l][r][m].
LinkChannel link_gain(const ChannelRealization& real, const ConfigPair& configs,
                      const Environment& env, std::size_t link);

struct BestCase {
  double magnitude = 0.0;
  RisConfig config;
};

inline constexpr std::size_t kMaxBestCaseElements = 20;

/// Exact max over all 2^n states of `surface` of |link_gain|, the other
/// surface held at `other_config`. Walks a Gray code so each step is one
/// incremental update. Throws std::invalid_argument for n > 20.
BestCase best_case_gain(const ChannelRealization& real, const Environment& env, std::size_t link,
                        std::size_t surface, const RisConfig& other_config);

nlohmann::json realization_to_json(const ChannelRealization& real);
ChannelRealization realization_from_json(const nlohmann::json& j);

}  // namespace rislab
