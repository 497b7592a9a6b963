// SPDX-License-Identifier: Apache-2.0
//
// rislab command line: run scenarios, list presets, summarize reports and
// dump capture-format waveforms.
#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "rislab/harness.hpp"
#include "rislab/seeding.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run(const std::string& scenario_arg, std::size_t n_seeds, const std::string& out_arg)
{
  rislab::Scenario sc = rislab::load_scenario(scenario_arg);
  if (n_seeds > 0) {
    const std::uint64_t first = sc.seeds.front();
    sc.seeds.clear();
    for (std::size_t i = 0; i < n_seeds; ++i) sc.seeds.push_back(first + i);
  }
  const std::filesystem::path out = out_arg.empty() ? std::filesystem::path(sc.output_dir) : std::filesystem::path(out_arg);
  spdlog::info("scenario {} ({}), {} seed(s), config {}", sc.name, rislab::to_string(sc.scenario_kind),
               sc.seeds.size(), sc.config_hash.substr(0, 12));

  rislab::RunReport report;
  report.scenario = sc;
  for (std::uint64_t seed : sc.seeds) {
    report.seeds.push_back(rislab::run_seed(sc, seed));
    const auto& s = report.seeds.back();
    spdlog::info("seed {}: link0 evm {:.2f} -> {:.2f} %, link1 evm {:.2f} -> {:.2f} %", seed,
                 s.traces[0].initial.evm_rms_pct, s.traces[0].final_best().evm_rms_pct,
                 s.traces[1].initial.evm_rms_pct, s.traces[1].final_best().evm_rms_pct);
  }
  report.summary = rislab::summarize_seeds(sc, report.seeds);
  report.timestamp = rislab::utc_timestamp();

  const auto path = rislab::write_report(report, out);
  const auto rows = rislab::summarize({rislab::report_to_json(report)}, {path.string()});
  std::cout << rislab::summary_text(rows);
  spdlog::info("wrote {}", path.string());
  return 0;
}

int cmd_list_presets()
{
  for (const auto& p : rislab::shipped_presets()) {
    const rislab::Scenario sc = rislab::load_preset(p.name);
    fmt::print("{:<22} {:<10} {:.3f}/{:.3f} GHz  gap {:.0f} MHz\n", p.name, rislab::to_string(sc.scenario_kind),
               sc.link_freqs_hz[0] / 1e9, sc.link_freqs_hz[1] / 1e9, sc.carrier_gap_hz() / 1e6);
  }
  return 0;
}

int cmd_summarize(const std::vector<std::string>& paths, const std::string& csv_path)
{
  std::vector<nlohmann::json> reports;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p);
    try {
      reports.push_back(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(p + ": " + e.what());
    }
  }
  const auto rows = rislab::summarize(reports, paths);
  std::cout << rislab::summary_text(rows);
  if (!csv_path.empty()) rislab::write_file_atomic(csv_path, rislab::summary_csv(rows));
  return 0;
}

int cmd_dump_waveform(const std::string& scenario_arg, std::size_t frame, std::size_t link,
                      std::optional<std::uint64_t> seed_arg, const std::string& out_arg, bool tx_only)
{
  const rislab::Scenario sc = rislab::load_scenario(scenario_arg);
  if (link >= rislab::kNumLinks) throw rislab::ConfigError("--link", "must be 0 or 1");
  const std::uint64_t seed = seed_arg.value_or(sc.seeds.front());

  const rislab::Environment env = sc.environment(seed);
  const auto real = rislab::draw_realization(env);
  const auto configs = sc.initial_configs(seed);
  const auto channel = rislab::link_gain(real, configs, env, link);
  const auto eval_seed = rislab::derive_seed(sc.optimizer_for(seed, link).seed, rislab::Stream::evaluation, {link, 0});

  rislab::FrameWaveform tx;
  const auto rx = rislab::received_frame(channel, sc.link_setup(), frame, eval_seed, &tx);
  const std::filesystem::path out =
      out_arg.empty() ? fmt::format("{}_seed{}_link{}_frame{}.cs16", sc.name, seed, link, frame) : out_arg;
  const nlohmann::json extra = {{"scenario", sc.name},       {"seed", seed},
                                {"link", link},              {"frame", frame},
                                {"carrier_hz", sc.link_freqs_hz[link]},
                                {"content", tx_only ? "tx" : "rx"}, {"config_hash", sc.config_hash}};
  rislab::write_iq16(out, tx_only ? tx.samples : rx, sc.frame, extra);
  spdlog::info("wrote {} ({} samples)", out.string(), tx_only ? tx.samples.size() : rx.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  spdlog::set_default_logger(spdlog::stderr_color_st("rislab"));
  spdlog::cfg::load_env_levels();

  CLI::App app{"Dual-RIS link optimization simulator"};
  app.set_version_flag("--version", std::string(rislab::kToolVersion));
  app.require_subcommand(1);

  std::string scenario, out, csv;
  std::size_t n_seeds = 0, frame = 0, link = 0;
  std::uint64_t seed = 0;
  bool tx_only = false;
  std::vector<std::string> reports;

  auto* run = app.add_subcommand("run", "Run a scenario file or shipped preset");
  run->add_option("scenario", scenario, "Scenario file or preset name")->required();
  run->add_option("--seeds", n_seeds, "Run N consecutive seeds starting at the scenario's first seed");
  run->add_option("--out", out, "Output directory (default: scenario output_dir)");

  auto* list = app.add_subcommand("list-presets", "List shipped scenario presets");

  auto* summ = app.add_subcommand("summarize", "Tabulate one or more report.json files");
  summ->add_option("reports", reports, "Report files")->required();
  summ->add_option("--csv", csv, "Also write the table as CSV");

  auto* dump = app.add_subcommand("dump-waveform", "Write one frame as 16-bit interleaved I/Q");
  dump->add_option("scenario", scenario, "Scenario file or preset name")->required();
  dump->add_option("--frame", frame, "Frame index")->required();
  dump->add_option("--link", link, "Link index (0 or 1)");
  auto* seed_opt = dump->add_option("--seed", seed, "Realization seed (default: first scenario seed)");
  dump->add_option("--out", out, "Output file");
  dump->add_flag("--tx", tx_only, "Dump the transmitted frame instead of the received one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario, n_seeds, out);
    if (*list) return cmd_list_presets();
    if (*summ) return cmd_summarize(reports, csv);
    if (*dump)
      return cmd_dump_waveform(scenario, frame, link, *seed_opt ? std::optional(seed) : std::nullopt, out, tx_only);
  } catch (const rislab::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return 0;
}
