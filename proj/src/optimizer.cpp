// SPDX-License-Identifier: Apache-2.0
#include "rislab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rislab/seeding.hpp"

namespace rislab {

const char* to_string(Objective o)
{
  switch (o) {
    case Objective::evm: return "evm";
    case Objective::ber: return "ber";
    case Objective::gain: return "gain";
  }
  return "?";
}

const char* to_string(Strategy s)
{
  switch (s) {
    case Strategy::greedy_flip: return "greedy_flip";
    case Strategy::random_search: return "random_search";
    case Strategy::exhaustive: return "exhaustive";
  }
  return "?";
}

Objective objective_from_string(const std::string& s)
{
  if (s == "evm") return Objective::evm;
  if (s == "ber") return Objective::ber;
  if (s == "gain") return Objective::gain;
  throw std::invalid_argument("unknown objective '" + s + "' (expected evm, ber or gain)");
}

Strategy strategy_from_string(const std::string& s)
{
  if (s == "greedy_flip") return Strategy::greedy_flip;
  if (s == "random_search") return Strategy::random_search;
  if (s == "exhaustive") return Strategy::exhaustive;
  throw std::invalid_argument("unknown strategy '" + s +
                              "' (expected greedy_flip, random_search or exhaustive)");
}

double objective_value(const KpiSample& sample, Objective objective)
{
  switch (objective) {
    case Objective::evm: return sample.evm_rms_pct;
    case Objective::ber: return sample.ber;
    case Objective::gain: return -sample.gain_mag;
  }
  return std::numeric_limits<double>::infinity();
}

void OptimizerSpec::validate() const
{
  if (frames_per_eval < 1) throw std::invalid_argument("OptimizerSpec: frames_per_eval must be >= 1");
  if (std::isnan(improvement_tol) || improvement_tol < 0.0)
    throw std::invalid_argument("OptimizerSpec: improvement_tol must be >= 0");
}

double cross_degradation(const KpiTrace& acting, Objective other_objective)
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : acting.rows) {
    if (!row.accepted || !row.cross || !row.cross_reference) continue;
    const double d = objective_value(*row.cross, other_objective) -
                     objective_value(*row.cross_reference, other_objective);
    sum += std::max(d, 0.0);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

KpiSample evaluate(const OptimizationContext& ctx, const ConfigPair& configs, std::size_t link,
                   Objective objective, std::size_t n_frames, std::uint64_t seed)
{
  if (objective == Objective::gain) {
    KpiSample s;
    s.gain_mag = std::abs(link_gain(ctx.real, configs, ctx.env, link).gain);
    return s;
  }
  return measure_link(ctx.real, configs, ctx.env, link, ctx.setup, n_frames, seed);
}

namespace {

std::uint64_t eval_seed(const OptimizerSpec& spec, std::size_t link, std::size_t index)
{
  return derive_seed(spec.seed, Stream::evaluation, {link, index});
}

bool improves(const KpiSample& candidate, const KpiSample& reference, const OptimizerSpec& spec)
{
  return objective_value(candidate, spec.objective) <
         objective_value(reference, spec.objective) - spec.improvement_tol;
}

// One operator's greedy search, steppable so two of them can interleave on
// a shared configuration pair. reference_ is the latest measurement of the
// configuration currently held; best_ is the running minimum.
class GreedyRun {
public:
  GreedyRun(const OptimizationContext& ctx, std::size_t link, std::size_t surface,
            const OptimizerSpec& spec)
      : ctx_(ctx), spec_(spec)
  {
    spec_.validate();
    trace_.link = link;
    trace_.surface = surface;
    trace_.objective = spec.objective;
    trace_.strategy = Strategy::greedy_flip;
    n_iter_ = spec.iterations_for(ctx.env.surfaces[surface].n_elements);
  }

  void begin(const ConfigPair& configs)
  {
    trace_.initial_config = configs[trace_.surface];
    trace_.best_config = trace_.initial_config;
    trace_.initial = evaluate(ctx_, configs, trace_.link, spec_.objective, spec_.frames_per_eval,
                              eval_seed(spec_, trace_.link, 0));
    best_ = trace_.initial;
    reference_ = trace_.initial;
  }

  // The held configuration was re-measured after the environment changed.
  // Only the acceptance reference moves; best_ counts own evaluations only.
  void refresh(const KpiSample& fresh) { reference_ = fresh; }

  bool done() const { return trace_.rows.size() >= n_iter_; }

  // Returns true when the flip was kept; configs[surface] is updated in place.
  bool step(ConfigPair& configs)
  {
    const std::size_t it = trace_.rows.size();
    const std::size_t n = configs[trace_.surface].size();
    TraceRow row;
    row.iteration = it;
    row.element = it % n;
    ConfigPair candidate = configs;
    candidate[trace_.surface] = flip_element(configs[trace_.surface], row.element);
    row.candidate = candidate[trace_.surface];
    row.config_hash = row.candidate.hash_hex();
    row.instantaneous = evaluate(ctx_, candidate, trace_.link, spec_.objective,
                                 spec_.frames_per_eval, eval_seed(spec_, trace_.link, it + 1));
    row.reference = reference_;
    row.accepted = improves(row.instantaneous, reference_, spec_);
    if (row.accepted) {
      reference_ = row.instantaneous;
      configs[trace_.surface] = candidate[trace_.surface];
      if (objective_value(reference_, spec_.objective) < objective_value(best_, spec_.objective)) {
        best_ = reference_;
        trace_.best_config = configs[trace_.surface];
      }
    }
    row.best = best_;
    trace_.rows.push_back(std::move(row));
    return trace_.rows.back().accepted;
  }

  const KpiSample& best() const { return best_; }
  const KpiSample& reference() const { return reference_; }
  const OptimizerSpec& spec() const { return spec_; }
  KpiTrace& trace() { return trace_; }

private:
  const OptimizationContext& ctx_;
  OptimizerSpec spec_;
  KpiTrace trace_;
  KpiSample best_;
  KpiSample reference_;
  std::size_t n_iter_ = 0;
};

void check_surface(std::size_t link, std::size_t surface)
{
  if (link >= kNumLinks || surface >= 2) throw std::invalid_argument("optimizer: index out of range");
}

}  // namespace

KpiTrace greedy_optimize(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                         const RisConfig& initial, const RisConfig& other_config,
                         const OptimizerSpec& spec)
{
  check_surface(link, own_surface);
  ConfigPair configs;
  configs[own_surface] = initial;
  configs[1 - own_surface] = other_config;
  GreedyRun run(ctx, link, own_surface, spec);
  run.begin(configs);
  while (!run.done()) run.step(configs);
  return std::move(run.trace());
}

std::array<KpiTrace, 2> dual_link_optimize(const OptimizationContext& ctx,
                                           const std::array<OptimizerSpec, 2>& specs,
                                           const ConfigPair& initial)
{
  ConfigPair configs = initial;
  std::array<GreedyRun, 2> runs{GreedyRun(ctx, 0, 0, specs[0]), GreedyRun(ctx, 1, 1, specs[1])};
  for (auto& r : runs) r.begin(configs);

  while (!runs[0].done() || !runs[1].done()) {
    for (std::size_t l = 0; l < 2; ++l) {
      if (runs[l].done()) continue;
      const ConfigPair before = configs;
      if (!runs[l].step(configs)) continue;
      const std::size_t other = 1 - l;
      auto& row = runs[l].trace().rows.back();
      const auto& ospec = runs[other].spec();
      // Same noise seed before and after the flip, so the difference is the
      // channel change alone.
      const std::uint64_t seed = derive_seed(ospec.seed, Stream::cross, {other, l, row.iteration});
      row.cross_reference = evaluate(ctx, before, other, ospec.objective, ospec.frames_per_eval, seed);
      row.cross = evaluate(ctx, configs, other, ospec.objective, ospec.frames_per_eval, seed);
      // A flip the other link cannot see leaves its reference alone.
      if (link_gain(ctx.real, before, ctx.env, other).gain != link_gain(ctx.real, configs, ctx.env, other).gain)
        runs[other].refresh(*row.cross);
    }
  }
  return {std::move(runs[0].trace()), std::move(runs[1].trace())};
}

KpiTrace random_search(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                       const RisConfig& other_config, const OptimizerSpec& spec)
{
  check_surface(link, own_surface);
  spec.validate();
  const std::size_t n = ctx.env.surfaces[own_surface].n_elements;
  const std::size_t n_iter = spec.iterations_for(n);
  KpiTrace trace;
  trace.link = link;
  trace.surface = own_surface;
  trace.objective = spec.objective;
  trace.strategy = Strategy::random_search;

  ConfigPair configs;
  configs[1 - own_surface] = other_config;
  KpiSample best;
  for (std::size_t it = 0; it < n_iter; ++it) {
    configs[own_surface] = random_config(n, derive_seed(spec.seed, Stream::candidate, {link, it}));
    TraceRow row;
    row.iteration = it;
    row.candidate = configs[own_surface];
    row.config_hash = row.candidate.hash_hex();
    row.instantaneous =
        evaluate(ctx, configs, link, spec.objective, spec.frames_per_eval, eval_seed(spec, link, it + 1));
    row.reference = best;
    row.accepted = it == 0 || improves(row.instantaneous, best, spec);
    if (it == 0) {
      trace.initial_config = configs[own_surface];
      trace.initial = row.instantaneous;
    }
    if (row.accepted) {
      best = row.instantaneous;
      trace.best_config = configs[own_surface];
    }
    row.best = best;
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

KpiTrace exhaustive(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                    const RisConfig& other_config)
{
  check_surface(link, own_surface);
  const std::size_t n = ctx.env.surfaces[own_surface].n_elements;
  if (n > kMaxExhaustiveElements)
    throw std::invalid_argument("exhaustive: refusing to enumerate " + std::to_string(n) +
                                " elements (limit " + std::to_string(kMaxExhaustiveElements) + ")");
  KpiTrace trace;
  trace.link = link;
  trace.surface = own_surface;
  trace.objective = Objective::gain;
  trace.strategy = Strategy::exhaustive;

  ConfigPair configs;
  configs[1 - own_surface] = other_config;
  KpiSample best;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::uint8_t> states(n);
    for (std::size_t m = 0; m < n; ++m) states[m] = (code >> m) & 1U;
    configs[own_surface] = RisConfig(std::move(states));
    TraceRow row;
    row.iteration = static_cast<std::size_t>(code);
    row.candidate = configs[own_surface];
    row.config_hash = row.candidate.hash_hex();
    row.instantaneous = evaluate(ctx, configs, link, Objective::gain, 1, 0);
    row.reference = best;
    row.accepted = code == 0 || row.instantaneous.gain_mag > best.gain_mag;
    if (code == 0) {
      trace.initial_config = configs[own_surface];
      trace.initial = row.instantaneous;
    }
    if (row.accepted) {
      best = row.instantaneous;
      trace.best_config = configs[own_surface];
    }
    row.best = best;
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

}  // namespace rislab
