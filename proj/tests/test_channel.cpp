// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "rislab/channel.hpp"
#include "rislab/seeding.hpp"

using namespace rislab;

namespace {

Environment small_env(std::size_t n, ScenarioKind kind = ScenarioKind::co_located, std::uint64_t seed = 1)
{
  Environment env;
  env.seed = seed;
  env.scenario_kind = kind;
  env.path_gain_profile = default_profile(kind, 0.125);
  for (auto& s : env.surfaces) s.n_elements = n;
  return env;
}

// Direct evaluation of the link gain sum, independent of link_gain.
cdouble oracle_gain(const ChannelRealization& real, const ConfigPair& c, const Environment& env, std::size_t l,
                    double f)
{
  cdouble h = real.direct[l];
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& m = env.surfaces[r].response;
    const double rho = m.reflection_magnitude;
    const double x = (f - m.resonance_freq_hz) / m.bandwidth_hz;
    const double dphi = M_PI / (1.0 + x * x);
    for (std::size_t k = 0; k < c[r].size(); ++k) {
      const cdouble g = c[r][k] ? std::polar(rho, dphi) : cdouble(rho, 0.0);
      h += real.paths[l][r].incident[k] * g * real.paths[l][r].departing[k];
    }
  }
  return h;
}

ConfigPair random_pair(const Environment& env, std::uint64_t seed)
{
  return {random_config(env.surfaces[0].n_elements, seed), random_config(env.surfaces[1].n_elements, seed + 1)};
}

}  // namespace

TEST_CASE("environment validation")
{
  Environment env;
  CHECK_NOTHROW(env.validate());
  env.link_freqs_hz = {5.2e9, 5.1e9};
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.link_freqs_hz = {5.2e9, 5.2e9};
  CHECK_THROWS(env.validate());
  env = Environment{};
  env.direct_path_rel_db = 0.0;
  CHECK_THROWS(env.validate());
  CHECK(scenario_kind_from_string("separated") == ScenarioKind::separated);
  CHECK(std::string(to_string(ScenarioKind::co_located)) == "co_located");
  CHECK_THROWS(scenario_kind_from_string("sideways"));
}

TEST_CASE("default profiles")
{
  const auto co = default_profile(ScenarioKind::co_located, 0.2);
  CHECK(co[0][1] == 0.2);
  CHECK(co[1][0] == 0.2);
  const auto sep = default_profile(ScenarioKind::separated, 0.2);
  CHECK(sep[0][0] == 0.2);
  CHECK(20.0 * std::log10(sep[0][1] / sep[0][0]) == doctest::Approx(-10.0).epsilon(1e-12));
}

TEST_CASE("realizations are deterministic and sized")
{
  const auto env = small_env(76);
  const auto a = draw_realization(env);
  const auto b = draw_realization(env);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(a.direct[l] == b.direct[l]);
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(a.paths[l][r].incident.size() == 76);
      CHECK(a.paths[l][r].incident == b.paths[l][r].incident);
      CHECK(a.paths[l][r].departing == b.paths[l][r].departing);
    }
  }
  auto env2 = env;
  env2.seed = 2;
  CHECK(draw_realization(env2).direct[0] != a.direct[0]);
}

TEST_CASE("direct path sits 20 dB below the cascade")
{
  auto env = small_env(76);
  double direct = 0.0, cascade = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    env.seed = static_cast<std::uint64_t>(s);
    const auto real = draw_realization(env);
    const auto c = random_pair(env, derive_seed(s, Stream::initial_config));
    const cdouble h = oracle_gain(real, c, env, 0, env.link_freqs_hz[0]);
    direct += std::norm(real.direct[0]);
    cascade += std::norm(h - real.direct[0]);
  }
  CHECK(10.0 * std::log10(direct / cascade) == doctest::Approx(-20.0).epsilon(0.05));
}

TEST_CASE("separated cross-surface power is 10 dB below own")
{
  auto env = small_env(76, ScenarioKind::separated);
  double own = 0.0, cross = 0.0;
  for (int s = 0; s < 2000; ++s) {
    env.seed = static_cast<std::uint64_t>(s);
    const auto real = draw_realization(env);
    for (std::size_t k = 0; k < 76; ++k) {
      own += std::norm(real.paths[0][0].incident[k] * real.paths[0][0].departing[k]);
      cross += std::norm(real.paths[0][1].incident[k] * real.paths[0][1].departing[k]);
    }
  }
  CHECK(std::abs(10.0 * std::log10(cross / own) + 10.0) < 1.0);
}

TEST_CASE("link_gain equals the explicit sum")
{
  const auto env = small_env(76);
  const auto real = draw_realization(env);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = random_pair(env, s * 7 + 3);
    for (std::size_t l = 0; l < 2; ++l) {
      const cdouble want = oracle_gain(real, c, env, l, env.link_freqs_hz[l]);
      CHECK(std::abs(link_gain(real, c, env, l).gain - want) < 1e-12 * std::abs(want) + 1e-15);
    }
  }
}

TEST_CASE("link_gain degenerate and one-term cases")
{
  auto env = small_env(1);
  ChannelRealization real;
  real.direct = {cdouble(0.01, -0.02), cdouble(0.0, 0.03)};
  for (auto& link : real.paths)
    for (auto& p : link) {
      p.incident = {0.0};
      p.departing = {0.0};
    }
  const ConfigPair ones{RisConfig::from_bitstring("1"), RisConfig::from_bitstring("1")};
  CHECK(link_gain(real, ones, env, 1).gain == real.direct[1]);

  // d + a*G*b by hand: 5.2 GHz, state 1 -> G = -0.9.
  env.link_freqs_hz = {5.1e9, 5.2e9};
  real.paths[1][0].incident = {cdouble(0.3, 0.4)};
  real.paths[1][0].departing = {cdouble(2.0, 0.0)};
  const cdouble want = real.direct[1] + cdouble(0.3, 0.4) * -0.9 * 2.0;
  CHECK(std::abs(link_gain(real, ones, env, 1).gain - want) < 1e-15);

  const ConfigPair bad{RisConfig(2), RisConfig(1)};
  CHECK_THROWS_AS(link_gain(real, bad, env, 0), std::invalid_argument);
}

TEST_CASE("flipping one element shifts the gain by a(G1-G0)b")
{
  const auto env = small_env(76);
  const auto real = draw_realization(env);
  auto c = random_pair(env, 11);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t l = rng() % 2, r = rng() % 2, k = rng() % 76;
    const double f = env.link_freqs_hz[l];
    const auto& m = env.surfaces[r].response;
    const cdouble g0 = reflection_coefficient(m, 0, f), g1 = reflection_coefficient(m, 1, f);
    const cdouble step = real.paths[l][r].incident[k] * (g1 - g0) * real.paths[l][r].departing[k];
    const cdouble before = link_gain(real, c, env, l).gain;
    const double sign = c[r][k] ? -1.0 : 1.0;
    c[r] = flip_element(c[r], k);
    const cdouble after = link_gain(real, c, env, l).gain;
    CHECK(std::abs((after - before) - sign * step) < 1e-12);
  }
}

TEST_CASE("frequency enters only through the reflection coefficient")
{
  auto env = small_env(76);
  const auto real = draw_realization(env);
  const auto c = random_pair(env, 5);
  for (double f : {5.0e9, 5.175e9, 5.3e9}) {
    env.link_freqs_hz = {f, f + 50e6};
    for (std::size_t l = 0; l < 2; ++l) {
      const cdouble want = oracle_gain(real, c, env, l, env.link_freqs_hz[l]);
      CHECK(std::abs(link_gain(real, c, env, l).gain - want) < 1e-12);
    }
  }
}

TEST_CASE("co-located coupling exceeds separated by at least 3 dB")
{
  double var[2];
  for (int k = 0; k < 2; ++k) {
    const auto env = small_env(76, k == 0 ? ScenarioKind::co_located : ScenarioKind::separated, 21);
    const auto real = draw_realization(env);
    const RisConfig own = random_config(76, 1);
    cdouble mean = 0.0;
    std::vector<cdouble> g;
    for (int s = 0; s < 1000; ++s) {
      const ConfigPair c{own, random_config(76, 1000 + s)};
      g.push_back(link_gain(real, c, env, 0).gain);
      mean += g.back();
    }
    mean /= 1000.0;
    double v = 0.0;
    for (auto x : g) v += std::norm(x - mean);
    var[k] = v / 999.0;
  }
  CHECK(10.0 * std::log10(var[0] / var[1]) >= 3.0);
}

TEST_CASE("best_case_gain")
{
  SUBCASE("n=1 picks the larger of the two states")
  {
    const auto env = small_env(1);
    const auto real = draw_realization(env);
    const RisConfig other = RisConfig::from_bitstring("0");
    const double g0 = std::abs(link_gain(real, {RisConfig::from_bitstring("0"), other}, env, 0).gain);
    const double g1 = std::abs(link_gain(real, {RisConfig::from_bitstring("1"), other}, env, 0).gain);
    CHECK(best_case_gain(real, env, 0, 0, other).magnitude == std::max(g0, g1));
  }
  SUBCASE("n=8 matches brute force in reversed enumeration order")
  {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto env = small_env(8, ScenarioKind::co_located, seed);
      const auto real = draw_realization(env);
      const RisConfig other = random_config(8, seed + 100);
      const auto best = best_case_gain(real, env, 1, 1, other);
      double oracle = 0.0;
      for (int code = 255; code >= 0; --code) {
        std::vector<std::uint8_t> st(8);
        for (int k = 0; k < 8; ++k) st[k] = (code >> k) & 1;
        const double g = std::abs(oracle_gain(real, {other, RisConfig(st)}, env, 1, env.link_freqs_hz[1]));
        oracle = std::max(oracle, g);
        CHECK(best.magnitude >= g * (1 - 1e-12));
      }
      CHECK(best.magnitude == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(std::abs(link_gain(real, {other, best.config}, env, 1).gain) == best.magnitude);
    }
  }
  SUBCASE("refuses large surfaces")
  {
    const auto env = small_env(21);
    const auto real = draw_realization(env);
    CHECK_THROWS_AS(best_case_gain(real, env, 0, 0, RisConfig(21)), std::invalid_argument);
  }
}

TEST_CASE("realization json round trip")
{
  const auto env = small_env(5);
  const auto real = draw_realization(env);
  const auto back = realization_from_json(nlohmann::json::parse(realization_to_json(real).dump()));
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(back.direct[l] == real.direct[l]);
    for (std::size_t r = 0; r < 2; ++r) CHECK(back.paths[l][r].incident == real.paths[l][r].incident);
  }
}
