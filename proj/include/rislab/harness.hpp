// SPDX-License-Identifier: Apache-2.0
//
// Scenarios, the experiment runner and report I/O.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rislab/channel.hpp"
#include "rislab/config.hpp"
#include "rislab/kpi.hpp"
#include "rislab/optimizer.hpp"
#include "rislab/phy.hpp"

namespace rislab {

inline constexpr const char* kToolName = "rislab";
inline constexpr const char* kToolVersion = RISLAB_VERSION;
inline constexpr int kTraceCsvVersion = 1;
inline constexpr int kReportVersion = 1;

/// Transport ceiling of the host link: 400 kS/s of 16-bit I and Q.
inline constexpr double kDefaultTransportRateBps = 12.8e6;

enum class InitialConfig { random, zeros };

struct Scenario {
  std::string name;
  ScenarioKind scenario_kind = ScenarioKind::co_located;
  std::array<double, kNumLinks> link_freqs_hz{5.1e9, 5.2e9};
  std::array<RisSurface, 2> surfaces{};
  double own_rms = 0.125;
  double cross_rel_db = 0.0;  // cross-surface rms relative to own, dB
  double direct_path_rel_db = -20.0;
  FrameSpec frame{};
  ImpairmentProfile impairments{};
  OptimizerSpec optimizer{};  // seed is derived per run
  InitialConfig initial_config = InitialConfig::random;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";
  double transport_max_rate_bps = kDefaultTransportRateBps;

  std::string config_hash;  // sha256 of the source file's canonical form

  double carrier_gap_hz() const { return link_freqs_hz[1] - link_freqs_hz[0]; }
  PathGainProfile profile() const;
  Environment environment(std::uint64_t seed) const;
  LinkSetup link_setup() const { return {frame, impairments}; }
  ConfigPair initial_configs(std::uint64_t seed) const;
  OptimizerSpec optimizer_for(std::uint64_t seed, std::size_t link) const;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Fully materialized scenario (every default written out).
nlohmann::json scenario_to_json(const Scenario& s);

/// Validates and fills defaults. `source` labels error messages.
Scenario scenario_from_json(const nlohmann::json& j);

/// Loads a scenario file, or a shipped preset when `path_or_preset` names one
/// and no such file exists.
Scenario load_scenario(const std::string& path_or_preset);

struct Preset {
  const char* name;
  const char* yaml;
};
const std::vector<Preset>& shipped_presets();
Scenario load_preset(const std::string& name);

struct SeedResult {
  std::uint64_t seed = 0;
  std::array<KpiTrace, 2> traces;
  // cross_degradation[l]: mean KPI increase on link l per acceptance made by
  // the other link.
  std::array<double, 2> cross_degradation{0.0, 0.0};
};

struct LinkSummary {
  double freq_hz = 0.0;
  std::size_t n_seeds = 0;
  double initial_evm_mean = 0.0, initial_evm_std = 0.0;
  double final_evm_mean = 0.0, final_evm_std = 0.0;
  double initial_ber_mean = 0.0, final_ber_mean = 0.0;
  double cross_degradation_mean = 0.0;
};

struct RunReport {
  Scenario scenario;
  std::vector<SeedResult> seeds;
  std::array<LinkSummary, 2> summary;
  std::string timestamp;  // excluded from determinism comparisons
};

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

/// Runs every seed: draw the realization, optimize according to the
/// scenario's strategy, collect traces. Pure; does not touch the filesystem.
RunReport run_scenario(const Scenario& scenario);

/// One seed of run_scenario.
SeedResult run_seed(const Scenario& scenario, std::uint64_t seed);

std::array<LinkSummary, 2> summarize_seeds(const Scenario& scenario, const std::vector<SeedResult>& seeds);

nlohmann::json report_to_json(const RunReport& report, bool include_timestamp = true);

/// CSV for one seed, rows interleaved by iteration then link.
std::string trace_csv(const Scenario& scenario, const SeedResult& seed);

/// report.json plus trace_seed_<seed>.csv per seed, each written atomically.
/// Returns the report path.
std::filesystem::path write_report(const RunReport& report, const std::filesystem::path& dir);

struct SummaryRow {
  std::string scenario;
  std::string scenario_kind;
  std::size_t link = 0;
  double freq_hz = 0.0;
  std::size_t n_seeds = 0;
  double initial_evm = 0.0, final_evm = 0.0;
  double initial_ber = 0.0, final_ber = 0.0;
  double cross_degradation = 0.0;
};

/// One row per link per report. Throws std::invalid_argument naming the
/// report when it holds no seeds or an empty trace.
std::vector<SummaryRow> summarize(const std::vector<nlohmann::json>& reports,
                                  const std::vector<std::string>& names);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_text(const std::vector<SummaryRow>& rows);

}  // namespace rislab
