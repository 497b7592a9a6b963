// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rislab/harness.hpp"

using namespace rislab;
using nlohmann::json;

namespace {

std::filesystem::path source_dir()
{
  const char* s = std::getenv("RISLAB_SOURCE_DIR");
  return s ? std::filesystem::path(s) : std::filesystem::path(".");
}

json preset_json(const std::string& name)
{
  for (const auto& p : shipped_presets())
    if (name == p.name) return parse_config_text(p.yaml);
  FAIL("no preset " << name);
  return {};
}

std::string error_key(const json& j)
{
  try {
    scenario_from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

Scenario short_run(const std::string& preset, std::vector<std::uint64_t> seeds, std::size_t iters)
{
  Scenario s = load_preset(preset);
  s.seeds = std::move(seeds);
  s.optimizer.n_iterations = iters;
  return s;
}

}  // namespace

TEST_CASE("shipped presets")
{
  CHECK(shipped_presets().size() == 3);
  const auto co = load_preset("colocated_51_52");
  CHECK(co.link_freqs_hz[0] == 5.1e9);
  CHECK(co.link_freqs_hz[1] == 5.2e9);
  CHECK(co.scenario_kind == ScenarioKind::co_located);
  CHECK(co.profile()[0][1] == co.own_rms);
  const auto s1 = load_preset("separated_52_53");
  CHECK(s1.carrier_gap_hz() == doctest::Approx(100e6));
  CHECK(s1.scenario_kind == ScenarioKind::separated);
  CHECK(20 * std::log10(s1.profile()[1][0] / s1.profile()[1][1]) == doctest::Approx(-10.0));
  const auto s2 = load_preset("separated_5175_5225");
  CHECK(s2.carrier_gap_hz() == doctest::Approx(50e6));
  CHECK_THROWS_AS(load_preset("nope"), ConfigError);
}

TEST_CASE("preset files on disk match the embedded copies")
{
  for (const auto& p : shipped_presets()) {
    const auto path = source_dir() / "scenarios" / (std::string(p.name) + ".yaml");
    REQUIRE(std::filesystem::exists(path));
    const auto from_file = load_scenario(path.string());
    CHECK(from_file.config_hash == load_preset(p.name).config_hash);
    CHECK(from_file.config_hash == sha256_hex(canonical_form(load_config_file(path))));
  }
  CHECK(load_scenario("separated_52_53").name == "separated_52_53");
}

TEST_CASE("validation names the offending key")
{
  auto j = preset_json("colocated_51_52");
  SUBCASE("frequencies out of order")
  {
    j["link_freqs_hz"] = {5.2e9, 5.1e9};
    CHECK(error_key(j) == "link_freqs_hz");
  }
  SUBCASE("unknown keys")
  {
    j["optimizer"]["learning_rate"] = 0.1;
    CHECK(error_key(j) == "optimizer.learning_rate");
    j = preset_json("colocated_51_52");
    j["colour"] = "blue";
    CHECK(error_key(j) == "colour");
  }
  SUBCASE("wrong types")
  {
    j["frame"]["samples_per_symbol"] = "four";
    CHECK(error_key(j) == "frame.samples_per_symbol");
    j = preset_json("colocated_51_52");
    j["seeds"] = {1, -2};
    CHECK(error_key(j) == "seeds[1]");
  }
  SUBCASE("throughput ceiling")
  {
    j["frame"]["sample_rate_hz"] = 800e3;
    CHECK(error_key(j) == "frame.sample_rate_hz");
    j = preset_json("colocated_51_52");
    j["transport"]["bits_per_component"] = 32;
    CHECK(error_key(j) == "transport.bits_per_component");
    j["transport"]["bits_per_component"] = 12;
    j["frame"]["sample_rate_hz"] = 600e3;
    CHECK(error_key(j) == "frame.sample_rate_hz");
    j["transport"]["max_rate_bps"] = 14.4e6;
    CHECK(error_key(j) == "<no error>");
  }
  SUBCASE("enumerations and ranges")
  {
    j["scenario_kind"] = "stacked";
    CHECK(error_key(j) == "scenario_kind");
    j = preset_json("colocated_51_52");
    j["optimizer"]["strategy"] = "exhaustive";
    j["optimizer"]["objective"] = "gain";
    CHECK(error_key(j) == "optimizer.strategy");
    j = preset_json("colocated_51_52");
    j["impairments"]["cfo_max_hz"] = 60e3;
    CHECK(error_key(j) == "impairments");
    j = preset_json("colocated_51_52");
    j["channel"]["direct_path_rel_db"] = 3.0;
    CHECK(error_key(j) == "channel.direct_path_rel_db");
  }
}

TEST_CASE("scenario echo is complete and reloadable")
{
  const auto s = load_preset("separated_5175_5225");
  const auto echo = scenario_to_json(s);
  CHECK(echo["carrier_gap_hz"].get<double>() == doctest::Approx(50e6));
  CHECK(echo["optimizer"]["n_iterations"] == 152);
  const auto back = scenario_from_json(echo);
  CHECK(scenario_to_json(back) == echo);
}

TEST_CASE("config hash detects any change")
{
  const std::string yaml = shipped_presets()[0].yaml;
  const auto base = scenario_from_json(parse_config_text(yaml)).config_hash;
  const auto pos = yaml.find("0.125");
  REQUIRE(pos != std::string::npos);
  std::string mutated = yaml;
  mutated[pos + 4] = '6';
  CHECK(scenario_from_json(parse_config_text(mutated)).config_hash != base);
}

TEST_CASE("run: trace shape, determinism, files")
{
  const auto sc = short_run("colocated_51_52", {3}, 12);
  const auto a = run_scenario(sc);
  const auto b = run_scenario(sc);
  REQUIRE(a.seeds.size() == 1);
  CHECK(a.seeds[0].traces[0].rows.size() == 12);
  CHECK(report_to_json(a, false).dump() == report_to_json(b, false).dump());
  CHECK(report_to_json(a)["provenance"].contains("timestamp"));
  CHECK(report_to_json(a)["provenance"]["config_hash"] == sc.config_hash);

  const std::string csv = trace_csv(sc, a.seeds[0]);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 2 + 2 * 12);
  CHECK(lines[0].rfind("# rislab-trace v1", 0) == 0);
  CHECK(lines[1] == "iter,link,accepted,evm_inst,evm_best,ber_inst,ber_best,cross_evm");

  const auto dir = std::filesystem::temp_directory_path() / "rislab_test_run";
  std::filesystem::remove_all(dir);
  const auto path = write_report(a, dir);
  CHECK(std::filesystem::exists(dir / "trace_seed_3.csv"));
  const auto j = json::parse(std::ifstream(path));
  CHECK(j["seeds"][0]["links"][1]["rows"].size() == 12);
  CHECK(j["seeds"][0]["links"][1]["rows"][0]["config"].get<std::string>().size() == 76);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: other strategies")
{
  auto sc = short_run("colocated_51_52", {1}, 6);
  sc.optimizer.strategy = Strategy::random_search;
  auto r = run_scenario(sc);
  CHECK(r.seeds[0].traces[1].rows.size() == 6);
  CHECK(r.seeds[0].traces[1].strategy == Strategy::random_search);

  for (auto& s : sc.surfaces) s.n_elements = 6;
  sc.optimizer.strategy = Strategy::exhaustive;
  sc.optimizer.objective = Objective::gain;
  r = run_scenario(sc);
  CHECK(r.seeds[0].traces[0].rows.size() == 64);
}

TEST_CASE("favourable-start preset still optimizes both links")
{
  const auto r = run_scenario(load_preset("separated_5175_5225"));
  REQUIRE(r.seeds.size() == 10);
  for (std::size_t l = 0; l < 2; ++l) {
    MESSAGE("link " << l << " evm " << r.summary[l].initial_evm_mean << " -> " << r.summary[l].final_evm_mean);
    CHECK(r.summary[l].initial_evm_mean - r.summary[l].final_evm_mean > 0.0);
  }
}

TEST_CASE("summarize")
{
  const auto rep = report_to_json(run_scenario(short_run("separated_52_53", {1, 2}, 8)));
  const auto rows = summarize({rep}, {"r"});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].link == 0);
  CHECK(rows[1].freq_hz == 5.3e9);
  CHECK(rows[0].n_seeds == 2);
  CHECK(summary_csv(rows).rfind("scenario,scenario_kind,link,", 0) == 0);
  CHECK(summary_text(rows).find("separated_52_53") != std::string::npos);

  auto empty = rep;
  empty["seeds"][1]["links"][0]["rows"] = json::array();
  try {
    summarize({rep, empty}, {"first.json", "second.json"});
    FAIL("expected refusal");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("second.json") != std::string::npos);
  }
  CHECK_THROWS(summarize({}, {}));
}

TEST_CASE("co-located coupling degrades the other link more than separated")
{
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  auto co = load_preset("colocated_51_52");
  co.seeds = seeds;
  auto sep = co;
  sep.name = "separated_51_52";
  sep.scenario_kind = ScenarioKind::separated;
  sep.cross_rel_db = kSeparatedCrossRelDb;
  const auto rows = summarize({report_to_json(run_scenario(co)), report_to_json(run_scenario(sep))}, {"co", "sep"});
  REQUIRE(rows.size() == 4);
  for (std::size_t l = 0; l < 2; ++l) {
    MESSAGE(fmt::format("link {}: co-located {:.3f}, separated {:.3f}", l, rows[l].cross_degradation,
                        rows[2 + l].cross_degradation));
    CHECK(rows[l].cross_degradation >= rows[2 + l].cross_degradation);
  }
}
