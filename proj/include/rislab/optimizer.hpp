// SPDX-License-Identifier: Apache-2.0
//
// Configuration search for one or two operators. Every strategy produces a
// KpiTrace: one row per evaluated candidate with the instantaneous KPI and
// the best-so-far KPI.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/kpi.hpp"

namespace rislab {

/// evm and ber run the full PHY; gain minimizes -|link gain| without noise.
enum class Objective { evm, ber, gain };
enum class Strategy { greedy_flip, random_search, exhaustive };

const char* to_string(Objective o);
const char* to_string(Strategy s);
Objective objective_from_string(const std::string& s);
Strategy strategy_from_string(const std::string& s);

/// Scalar being minimized.
double objective_value(const KpiSample& sample, Objective objective);

struct OptimizerSpec {
  Objective objective = Objective::evm;
  std::size_t n_iterations = 0;  // 0 selects 2 * n_elements
  std::size_t frames_per_eval = 3;
  double improvement_tol = 1e-3;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::greedy_flip;

  std::size_t iterations_for(std::size_t n_elements) const
  {
    return n_iterations == 0 ? 2 * n_elements : n_iterations;
  }
  void validate() const;
};

inline constexpr std::size_t kNoElement = static_cast<std::size_t>(-1);
inline constexpr std::size_t kMaxExhaustiveElements = 16;

struct TraceRow {
  std::size_t iteration = 0;
  std::size_t element = kNoElement;  // flipped element (greedy only)
  RisConfig candidate;
  std::string config_hash;
  KpiSample instantaneous;
  KpiSample reference;  // what the candidate had to beat (see GreedyRun)
  KpiSample best;       // lowest objective observed so far
  bool accepted = false;
  // Dual-link runs: the other link measured just before and just after this
  // acceptance with one shared noise seed.
  std::optional<KpiSample> cross;
  std::optional<KpiSample> cross_reference;
};

struct KpiTrace {
  std::size_t link = 0;
  std::size_t surface = 0;
  Objective objective = Objective::evm;
  Strategy strategy = Strategy::greedy_flip;
  RisConfig initial_config;
  KpiSample initial;  // baseline measurement before the first move
  std::vector<TraceRow> rows;
  RisConfig best_config;

  const KpiSample& final_best() const { return rows.empty() ? initial : rows.back().best; }
};

/// Mean increase of the other link's objective per acceptance in this trace
/// (after minus before, improvements count as zero). 0 when there were none.
double cross_degradation(const KpiTrace& acting, Objective other_objective);

/// Shared, read-only inputs of an optimization run.
struct OptimizationContext {
  const Environment& env;
  const ChannelRealization& real;
  LinkSetup setup;
};

/// Measures `link` at `configs` for the given objective.
KpiSample evaluate(const OptimizationContext& ctx, const ConfigPair& configs, std::size_t link,
                   Objective objective, std::size_t n_frames, std::uint64_t seed);

/// Cyclic single-flip greedy search. Iteration i flips element i mod n,
/// keeps the flip iff the objective improves on the best so far by more
/// than improvement_tol, and reverts otherwise. With a fixed environment the
/// reference a candidate must beat is exactly the best so far.
KpiTrace greedy_optimize(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                         const RisConfig& initial, const RisConfig& other_config,
                         const OptimizerSpec& spec);

/// Two operators, link l owning surface l, interleaved: link 0 takes one
/// greedy step against the current surface 1, then link 1 steps against the
/// updated surface 0. After every acceptance the other link is re-measured
/// and that measurement becomes its new acceptance reference, since the
/// configuration it holds now sees a different channel. The best-so-far
/// record only takes the link's own candidate evaluations.
std::array<KpiTrace, 2> dual_link_optimize(const OptimizationContext& ctx,
                                           const std::array<OptimizerSpec, 2>& specs,
                                           const ConfigPair& initial);

/// Uniform random configurations, best tracked with the same acceptance rule.
KpiTrace random_search(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                       const RisConfig& other_config, const OptimizerSpec& spec);

/// Enumerates every configuration of `own_surface` on the noiseless |gain|
/// objective. Throws std::invalid_argument for more than 16 elements.
KpiTrace exhaustive(const OptimizationContext& ctx, std::size_t link, std::size_t own_surface,
                    const RisConfig& other_config);

}  // namespace rislab
