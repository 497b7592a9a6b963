// SPDX-License-Identifier: Apache-2.0
#include "rislab/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <set>
#include <sstream>

#include "rislab/seeding.hpp"

namespace rislab {

namespace {

using nlohmann::json;

// Typed access to one JSON object that remembers which keys were read, so
// anything left over can be reported as unknown.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return j_.contains(k); }

  double number(const std::string& k, double def)
  {
    const json* v = take(k);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(key(k), "expected a number");
    return v->get<double>();
  }

  std::uint64_t uint(const std::string& k, std::uint64_t def)
  {
    const json* v = take(k);
    if (!v) return def;
    return as_uint(*v, key(k));
  }

  std::string string(const std::string& k, const std::string& def)
  {
    const json* v = take(k);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(key(k), "expected a string");
    return v->get<std::string>();
  }

  const json* take(const std::string& k)
  {
    used_.insert(k);
    auto it = j_.find(k);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  Reader child(const std::string& k)
  {
    static const json empty = json::object();
    const json* v = take(k);
    return Reader(v ? *v : empty, key(k));
  }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
  }

  static std::uint64_t as_uint(const json& v, const std::string& where)
  {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) throw ConfigError(where, "must be >= 0");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(where, "expected a non-negative integer");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class F>
void check(const std::string& key, F&& f)
{
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

RisSurface read_surface(Reader r, const std::string& default_label)
{
  RisSurface s;
  s.label = r.string("label", default_label);
  s.n_elements = r.uint("n_elements", s.n_elements);
  s.response.resonance_freq_hz = r.number("resonance_freq_hz", s.response.resonance_freq_hz);
  s.response.bandwidth_hz = r.number("bandwidth_hz", s.response.bandwidth_hz);
  s.response.reflection_magnitude = r.number("reflection_magnitude", s.response.reflection_magnitude);
  r.finish();
  return s;
}

json kpi_json(const KpiSample& k)
{
  return {{"evm_rms_pct", k.evm_rms_pct}, {"ber", k.ber},           {"n_bits", k.n_bits},
          {"n_bit_errors", k.n_bit_errors}, {"sync_ok", k.sync_ok}, {"gain_mag", k.gain_mag},
          {"frames_failed", k.frames_failed}};
}

json trace_json(const KpiTrace& t)
{
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = {{"iter", r.iteration},
                {"config", r.candidate.bitstring()},
                {"config_hash", r.config_hash},
                {"accepted", r.accepted},
                {"instantaneous", kpi_json(r.instantaneous)},
                {"reference", kpi_json(r.reference)},
                {"best", kpi_json(r.best)}};
    row["element"] = r.element == kNoElement ? json(nullptr) : json(r.element);
    if (r.cross) row["cross"] = kpi_json(*r.cross);
    if (r.cross_reference) row["cross_reference"] = kpi_json(*r.cross_reference);
    rows.push_back(std::move(row));
  }
  return {{"link", t.link},
          {"surface", t.surface},
          {"objective", to_string(t.objective)},
          {"strategy", to_string(t.strategy)},
          {"initial_config", t.initial_config.bitstring()},
          {"best_config", t.best_config.bitstring()},
          {"initial", kpi_json(t.initial)},
          {"final_best", kpi_json(t.final_best())},
          {"rows", std::move(rows)}};
}

std::pair<double, double> mean_std(const std::vector<double>& v)
{
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace

std::string utc_timestamp()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

PathGainProfile Scenario::profile() const
{
  const double cross = own_rms * std::pow(10.0, cross_rel_db / 20.0);
  return {{{own_rms, cross}, {cross, own_rms}}};
}

Environment Scenario::environment(std::uint64_t seed) const
{
  Environment env;
  env.seed = seed;
  env.surfaces = surfaces;
  env.link_freqs_hz = link_freqs_hz;
  env.path_gain_profile = profile();
  env.direct_path_rel_db = direct_path_rel_db;
  env.scenario_kind = scenario_kind;
  return env;
}

ConfigPair Scenario::initial_configs(std::uint64_t seed) const
{
  ConfigPair c;
  for (std::size_t r = 0; r < 2; ++r) {
    c[r] = initial_config == InitialConfig::zeros
               ? RisConfig(surfaces[r].n_elements)
               : random_config(surfaces[r].n_elements, derive_seed(seed, Stream::initial_config, {r}));
  }
  return c;
}

OptimizerSpec Scenario::optimizer_for(std::uint64_t seed, std::size_t link) const
{
  OptimizerSpec spec = optimizer;
  spec.seed = derive_seed(seed, Stream::optimizer, {link});
  return spec;
}

void Scenario::validate() const
{
  if (name.empty()) throw ConfigError("name", "must not be empty");
  if (!(link_freqs_hz[0] > 0.0)) throw ConfigError("link_freqs_hz", "frequencies must be > 0");
  if (!(link_freqs_hz[1] > link_freqs_hz[0]))
    throw ConfigError("link_freqs_hz", "must be strictly increasing (carrier gap " +
                                           fmt::format("{:g}", carrier_gap_hz()) + " Hz)");
  for (std::size_t r = 0; r < 2; ++r)
    check(fmt::format("surfaces[{}]", r), [&] { surfaces[r].validate(); });
  if (!(own_rms > 0.0) || !std::isfinite(own_rms)) throw ConfigError("channel.own_rms", "must be > 0");
  if (!std::isfinite(cross_rel_db)) throw ConfigError("channel.cross_rel_db", "must be finite");
  if (!(direct_path_rel_db < 0.0)) throw ConfigError("channel.direct_path_rel_db", "must be < 0");
  if (frame.transport_bits < 2 || frame.transport_bits > 16)
    throw ConfigError("transport.bits_per_component", "must be in [2, 16]");
  check("frame", [&] { frame.validate(); });
  check("impairments", [&] { impairments.validate(frame); });
  if (!std::isfinite(impairments.snr_db)) throw ConfigError("impairments.snr_db", "must be finite");
  check("optimizer", [&] { optimizer.validate(); });
  if (optimizer.strategy == Strategy::exhaustive) {
    if (optimizer.objective != Objective::gain)
      throw ConfigError("optimizer.objective", "exhaustive strategy only supports the gain objective");
    for (const auto& s : surfaces)
      if (s.n_elements > kMaxExhaustiveElements)
        throw ConfigError("optimizer.strategy",
                          fmt::format("exhaustive search limited to {} elements", kMaxExhaustiveElements));
  }
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  const double rate = frame.transport_rate_bps();
  if (!(rate <= transport_max_rate_bps))
    throw ConfigError("frame.sample_rate_hz",
                      fmt::format("{:g} S/s x 2 x {} bit = {:g} bit/s exceeds transport limit {:g} bit/s",
                                  frame.sample_rate_hz, frame.transport_bits, rate, transport_max_rate_bps));
}

json scenario_to_json(const Scenario& s)
{
  json surfaces = json::array();
  for (const auto& r : s.surfaces) {
    surfaces.push_back({{"label", r.label},
                        {"n_elements", r.n_elements},
                        {"resonance_freq_hz", r.response.resonance_freq_hz},
                        {"bandwidth_hz", r.response.bandwidth_hz},
                        {"reflection_magnitude", r.response.reflection_magnitude}});
  }
  return {
      {"name", s.name},
      {"scenario_kind", to_string(s.scenario_kind)},
      {"link_freqs_hz", {s.link_freqs_hz[0], s.link_freqs_hz[1]}},
      {"carrier_gap_hz", s.carrier_gap_hz()},
      {"surfaces", surfaces},
      {"channel",
       {{"own_rms", s.own_rms}, {"cross_rel_db", s.cross_rel_db}, {"direct_path_rel_db", s.direct_path_rel_db}}},
      {"frame",
       {{"preamble_repeats", s.frame.preamble_repeats},
        {"payload_bits", s.frame.payload_bits},
        {"samples_per_symbol", s.frame.samples_per_symbol},
        {"rrc_rolloff", s.frame.rrc_rolloff},
        {"rrc_span_symbols", s.frame.rrc_span_symbols},
        {"sample_rate_hz", s.frame.sample_rate_hz},
        {"coarse_fft_len", s.frame.coarse_fft_len},
        {"loop_bandwidth", s.frame.loop_bandwidth},
        {"loop_damping", s.frame.loop_damping},
        {"sync_threshold", s.frame.sync_threshold}}},
      {"transport",
       {{"bits_per_component", s.frame.transport_bits}, {"max_rate_bps", s.transport_max_rate_bps}}},
      {"impairments",
       {{"cfo_max_hz", s.impairments.cfo_max_hz},
        {"phase_offset_max_rad", s.impairments.phase_offset_max_rad},
        {"timing_offset_max_symbols", s.impairments.timing_offset_max_symbols},
        {"snr_db", s.impairments.snr_db}}},
      {"optimizer",
       {{"objective", to_string(s.optimizer.objective)},
        {"strategy", to_string(s.optimizer.strategy)},
        {"n_iterations", s.optimizer.iterations_for(s.surfaces[0].n_elements)},
        {"frames_per_eval", s.optimizer.frames_per_eval},
        {"improvement_tol", s.optimizer.improvement_tol},
        {"initial_config", s.initial_config == InitialConfig::zeros ? "zeros" : "random"}}},
      {"seeds", s.seeds},
      {"output_dir", s.output_dir},
  };
}

Scenario scenario_from_json(const json& j)
{
  Scenario s;
  Reader root(j, "");
  s.name = root.string("name", "");
  check("scenario_kind",
        [&] { s.scenario_kind = scenario_kind_from_string(root.string("scenario_kind", "co_located")); });

  if (const json* f = root.take("link_freqs_hz")) {
    if (!f->is_array() || f->size() != 2) throw ConfigError("link_freqs_hz", "expected a list of two frequencies");
    for (std::size_t l = 0; l < 2; ++l) {
      if (!(*f)[l].is_number()) throw ConfigError(fmt::format("link_freqs_hz[{}]", l), "expected a number");
      s.link_freqs_hz[l] = (*f)[l].get<double>();
    }
  }
  root.take("carrier_gap_hz");  // derived; echoed by scenario_to_json

  if (const json* surf = root.take("surfaces")) {
    if (surf->is_array()) {
      if (surf->size() != 2) throw ConfigError("surfaces", "expected exactly two surfaces");
      for (std::size_t r = 0; r < 2; ++r)
        s.surfaces[r] = read_surface(Reader((*surf)[r], fmt::format("surfaces[{}]", r)), fmt::format("ris{}", r + 1));
    } else {
      for (std::size_t r = 0; r < 2; ++r)
        s.surfaces[r] = read_surface(Reader(*surf, "surfaces"), fmt::format("ris{}", r + 1));
    }
  } else {
    for (std::size_t r = 0; r < 2; ++r) s.surfaces[r].label = fmt::format("ris{}", r + 1);
  }

  {
    Reader c = root.child("channel");
    s.own_rms = c.number("own_rms", s.own_rms);
    s.cross_rel_db =
        c.number("cross_rel_db", s.scenario_kind == ScenarioKind::separated ? kSeparatedCrossRelDb : 0.0);
    s.direct_path_rel_db = c.number("direct_path_rel_db", s.direct_path_rel_db);
    c.finish();
  }
  {
    Reader f = root.child("frame");
    s.frame.preamble_repeats = f.uint("preamble_repeats", s.frame.preamble_repeats);
    s.frame.payload_bits = f.uint("payload_bits", s.frame.payload_bits);
    s.frame.samples_per_symbol = f.uint("samples_per_symbol", s.frame.samples_per_symbol);
    s.frame.rrc_rolloff = f.number("rrc_rolloff", s.frame.rrc_rolloff);
    s.frame.rrc_span_symbols = f.uint("rrc_span_symbols", s.frame.rrc_span_symbols);
    s.frame.sample_rate_hz = f.number("sample_rate_hz", s.frame.sample_rate_hz);
    s.frame.coarse_fft_len = f.uint("coarse_fft_len", s.frame.coarse_fft_len);
    s.frame.loop_bandwidth = f.number("loop_bandwidth", s.frame.loop_bandwidth);
    s.frame.loop_damping = f.number("loop_damping", s.frame.loop_damping);
    s.frame.sync_threshold = f.number("sync_threshold", s.frame.sync_threshold);
    f.finish();
  }
  {
    Reader t = root.child("transport");
    s.frame.transport_bits = t.uint("bits_per_component", s.frame.transport_bits);
    s.transport_max_rate_bps = t.number("max_rate_bps", s.transport_max_rate_bps);
    t.finish();
  }
  {
    Reader i = root.child("impairments");
    s.impairments.cfo_max_hz = i.number("cfo_max_hz", s.impairments.cfo_max_hz);
    s.impairments.phase_offset_max_rad = i.number("phase_offset_max_rad", s.impairments.phase_offset_max_rad);
    s.impairments.timing_offset_max_symbols =
        i.number("timing_offset_max_symbols", s.impairments.timing_offset_max_symbols);
    s.impairments.snr_db = i.number("snr_db", s.impairments.snr_db);
    i.finish();
  }
  {
    Reader o = root.child("optimizer");
    check(o.key("objective"), [&] { s.optimizer.objective = objective_from_string(o.string("objective", "evm")); });
    check(o.key("strategy"),
          [&] { s.optimizer.strategy = strategy_from_string(o.string("strategy", "greedy_flip")); });
    s.optimizer.n_iterations = o.uint("n_iterations", 0);
    s.optimizer.frames_per_eval = o.uint("frames_per_eval", s.optimizer.frames_per_eval);
    s.optimizer.improvement_tol = o.number("improvement_tol", s.optimizer.improvement_tol);
    const std::string init = o.string("initial_config", "random");
    if (init == "random") s.initial_config = InitialConfig::random;
    else if (init == "zeros") s.initial_config = InitialConfig::zeros;
    else throw ConfigError(o.key("initial_config"), "expected random or zeros");
    o.finish();
  }
  if (const json* seeds = root.take("seeds")) {
    if (!seeds->is_array()) throw ConfigError("seeds", "expected a list of integers");
    s.seeds.clear();
    for (std::size_t k = 0; k < seeds->size(); ++k)
      s.seeds.push_back(Reader::as_uint((*seeds)[k], fmt::format("seeds[{}]", k)));
  }
  s.output_dir = root.string("output_dir", "out/" + s.name);
  root.finish();

  s.validate();
  s.config_hash = sha256_hex(canonical_form(j));
  return s;
}

Scenario load_preset(const std::string& name)
{
  for (const auto& p : shipped_presets())
    if (name == p.name) return scenario_from_json(parse_config_text(p.yaml, std::string("preset ") + p.name));
  throw ConfigError("", "unknown preset '" + name + "'");
}

Scenario load_scenario(const std::string& path_or_preset)
{
  const std::filesystem::path path(path_or_preset);
  if (std::filesystem::exists(path)) return scenario_from_json(load_config_file(path));
  for (const auto& p : shipped_presets())
    if (path_or_preset == p.name) return load_preset(p.name);
  throw ConfigError("", "no scenario file or preset named '" + path_or_preset + "'");
}

SeedResult run_seed(const Scenario& scenario, std::uint64_t seed)
{
  const Environment env = scenario.environment(seed);
  const ChannelRealization real = draw_realization(env);
  const OptimizationContext ctx{env, real, scenario.link_setup()};
  const ConfigPair init = scenario.initial_configs(seed);
  const std::array<OptimizerSpec, 2> specs{scenario.optimizer_for(seed, 0), scenario.optimizer_for(seed, 1)};

  SeedResult out;
  out.seed = seed;
  switch (scenario.optimizer.strategy) {
    case Strategy::greedy_flip: out.traces = dual_link_optimize(ctx, specs, init); break;
    case Strategy::random_search:
      for (std::size_t l = 0; l < 2; ++l) out.traces[l] = random_search(ctx, l, l, init[1 - l], specs[l]);
      break;
    case Strategy::exhaustive:
      for (std::size_t l = 0; l < 2; ++l) out.traces[l] = exhaustive(ctx, l, l, init[1 - l]);
      break;
  }
  for (std::size_t l = 0; l < 2; ++l)
    out.cross_degradation[l] = cross_degradation(out.traces[1 - l], scenario.optimizer.objective);
  return out;
}

std::array<LinkSummary, 2> summarize_seeds(const Scenario& scenario, const std::vector<SeedResult>& seeds)
{
  std::array<LinkSummary, 2> out;
  for (std::size_t l = 0; l < 2; ++l) {
    std::vector<double> ie, fe, ib, fb, cd;
    for (const auto& s : seeds) {
      const auto& t = s.traces[l];
      ie.push_back(t.initial.evm_rms_pct);
      fe.push_back(t.final_best().evm_rms_pct);
      ib.push_back(t.initial.ber);
      fb.push_back(t.final_best().ber);
      cd.push_back(s.cross_degradation[l]);
    }
    auto& m = out[l];
    m.freq_hz = scenario.link_freqs_hz[l];
    m.n_seeds = seeds.size();
    std::tie(m.initial_evm_mean, m.initial_evm_std) = mean_std(ie);
    std::tie(m.final_evm_mean, m.final_evm_std) = mean_std(fe);
    m.initial_ber_mean = mean_std(ib).first;
    m.final_ber_mean = mean_std(fb).first;
    m.cross_degradation_mean = mean_std(cd).first;
  }
  return out;
}

RunReport run_scenario(const Scenario& scenario)
{
  scenario.validate();
  RunReport report;
  report.scenario = scenario;
  report.timestamp = utc_timestamp();
  for (std::uint64_t seed : scenario.seeds) report.seeds.push_back(run_seed(scenario, seed));
  report.summary = summarize_seeds(scenario, report.seeds);
  return report;
}

json report_to_json(const RunReport& report, bool include_timestamp)
{
  json summary = json::array();
  for (std::size_t l = 0; l < 2; ++l) {
    const auto& m = report.summary[l];
    summary.push_back({{"link", l},
                       {"freq_hz", m.freq_hz},
                       {"n_seeds", m.n_seeds},
                       {"initial_evm_mean", m.initial_evm_mean},
                       {"initial_evm_std", m.initial_evm_std},
                       {"final_evm_mean", m.final_evm_mean},
                       {"final_evm_std", m.final_evm_std},
                       {"initial_ber_mean", m.initial_ber_mean},
                       {"final_ber_mean", m.final_ber_mean},
                       {"cross_degradation_mean", m.cross_degradation_mean}});
  }
  json seeds = json::array();
  for (const auto& s : report.seeds) {
    seeds.push_back({{"seed", s.seed},
                     {"cross_degradation", {s.cross_degradation[0], s.cross_degradation[1]}},
                     {"links", {trace_json(s.traces[0]), trace_json(s.traces[1])}}});
  }
  json provenance = {{"tool", kToolName},
                     {"tool_version", kToolVersion},
                     {"config_hash", report.scenario.config_hash},
                     {"seeds", report.scenario.seeds}};
  if (include_timestamp) provenance["timestamp"] = report.timestamp;
  return {{"report_version", kReportVersion},
          {"provenance", provenance},
          {"scenario", scenario_to_json(report.scenario)},
          {"summary", summary},
          {"seeds", seeds}};
}

std::string trace_csv(const Scenario& scenario, const SeedResult& seed)
{
  std::string out = fmt::format("# rislab-trace v{} scenario={} seed={} config_hash={}\n", kTraceCsvVersion,
                                scenario.name, seed.seed, scenario.config_hash);
  out += "iter,link,accepted,evm_inst,evm_best,ber_inst,ber_best,cross_evm\n";
  const std::size_t n = std::max(seed.traces[0].rows.size(), seed.traces[1].rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < 2; ++l) {
      const auto& rows = seed.traces[l].rows;
      if (i >= rows.size()) continue;
      const auto& r = rows[i];
      out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.iteration, l, r.accepted ? 1 : 0,
                         r.instantaneous.evm_rms_pct, r.best.evm_rms_pct, r.instantaneous.ber, r.best.ber,
                         r.cross ? fmt::format("{:.6f}", r.cross->evm_rms_pct) : std::string());
    }
  }
  return out;
}

std::filesystem::path write_report(const RunReport& report, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  for (const auto& s : report.seeds)
    write_file_atomic(dir / fmt::format("trace_seed_{}.csv", s.seed), trace_csv(report.scenario, s));
  const auto path = dir / "report.json";
  write_file_atomic(path, report_to_json(report).dump(1) + "\n");
  return path;
}

std::vector<SummaryRow> summarize(const std::vector<json>& reports, const std::vector<std::string>& names)
{
  if (reports.empty()) throw std::invalid_argument("summarize: no reports given");
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const std::string name = i < names.size() ? names[i] : fmt::format("report #{}", i);
    try {
      const auto& rep = reports[i];
      const auto& sc = rep.at("scenario");
      const auto& seeds = rep.at("seeds");
      if (seeds.empty()) throw std::invalid_argument("report holds no seeds");
      for (std::size_t l = 0; l < 2; ++l) {
        SummaryRow row;
        row.scenario = sc.at("name").get<std::string>();
        row.scenario_kind = sc.at("scenario_kind").get<std::string>();
        row.link = l;
        row.freq_hz = sc.at("link_freqs_hz").at(l).get<double>();
        for (const auto& s : seeds) {
          const auto& t = s.at("links").at(l);
          if (t.at("rows").empty())
            throw std::invalid_argument(fmt::format("empty trace for seed {} link {}", s.at("seed").dump(), l));
          const auto& last = t.at("rows").back().at("best");
          row.initial_evm += t.at("initial").at("evm_rms_pct").get<double>();
          row.final_evm += last.at("evm_rms_pct").get<double>();
          row.initial_ber += t.at("initial").at("ber").get<double>();
          row.final_ber += last.at("ber").get<double>();
          row.cross_degradation += s.at("cross_degradation").at(l).get<double>();
        }
        const auto n = static_cast<double>(seeds.size());
        row.n_seeds = seeds.size();
        row.initial_evm /= n;
        row.final_evm /= n;
        row.initial_ber /= n;
        row.final_ber /= n;
        row.cross_degradation /= n;
        rows.push_back(row);
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument(name + ": malformed report: " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(name + ": " + e.what());
    }
  }
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows)
{
  std::string out =
      "scenario,scenario_kind,link,freq_hz,n_seeds,initial_evm,final_evm,initial_ber,final_ber,cross_degradation\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{:.0f},{},{:.4f},{:.4f},{:.6f},{:.6f},{:.4f}\n", r.scenario, r.scenario_kind,
                       r.link, r.freq_hz, r.n_seeds, r.initial_evm, r.final_evm, r.initial_ber, r.final_ber,
                       r.cross_degradation);
  return out;
}

std::string summary_text(const std::vector<SummaryRow>& rows)
{
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.scenario.size());
  std::string out = fmt::format("{:<{}}  {:<10}  {:>4}  {:>8}  {:>5}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}\n", "scenario",
                                w, "kind", "link", "freq_GHz", "seeds", "evm0_%", "evm_opt_%", "ber0", "ber_opt",
                                "xdeg_%");
  for (const auto& r : rows)
    out += fmt::format("{:<{}}  {:<10}  {:>4}  {:>8.3f}  {:>5}  {:>9.3f}  {:>9.3f}  {:>9.2e}  {:>9.2e}  {:>9.3f}\n",
                       r.scenario, w, r.scenario_kind, r.link, r.freq_hz / 1e9, r.n_seeds, r.initial_evm,
                       r.final_evm, r.initial_ber, r.final_ber, r.cross_degradation);
  return out;
}

}  // namespace rislab
