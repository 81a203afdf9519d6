#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bmm/bootstrap_ci.hpp"
#include "bmm/distributions.hpp"
#include "bmm/error.hpp"
#include "bmm/estimators.hpp"
#include "bmm/order_stats.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"
#include "oracles.hpp"

using bmm::Sample;

namespace {

Sample gaussian_sample(std::size_t n, std::uint64_t seed) {
  auto stream = bmm::derive_substream(seed, 0);
  return bmm::sample_distribution(bmm::dist::Normal{0.0, 1.0}, n, stream);
}

bmm::CIConfig config_with(std::uint64_t seed, std::size_t B = 300) {
  bmm::CIConfig c;
  c.B = B;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("constant sample gives a degenerate interval") {
  const auto r = bmm::ci_bmm(Sample({2.0, 2.0, 2.0, 2.0}), config_with(1));
  CHECK(r.lower == 2.0);
  CHECK(r.upper == 2.0);
  CHECK(r.point_estimate == 2.0);
}

TEST_CASE("wider levels never widen the interval") {
  const Sample s = gaussian_sample(60, 2);
  double previous = INFINITY;
  for (double lc : {0.01, 0.05, 0.1, 0.2, 0.5, 0.9}) {
    auto c = config_with(3);
    c.level_complement = lc;
    const auto r = bmm::ci_bmm(s, c);
    CHECK(r.upper - r.lower <= previous);
    previous = r.upper - r.lower;
  }
}

TEST_CASE("endpoints are the linear-interpolation quantiles of the replicates") {
  const Sample s = gaussian_sample(40, 4);
  auto c = config_with(5, 101);
  c.retain_estimates = true;
  for (bool fixed : {true, false}) {
    c.fix_dirichlet_draws = fixed;
    const auto r = bmm::ci_bmm(s, c);
    REQUIRE(r.bootstrap_estimates);
    REQUIRE(r.bootstrap_estimates->size() == 101);
    std::vector<double> sorted = *r.bootstrap_estimates;
    std::sort(sorted.begin(), sorted.end());
    // h = (B - 1) p = 2.5 and 97.5 for B = 101.
    CHECK(r.lower == 0.5 * (sorted[2] + sorted[3]));
    CHECK(r.upper == 0.5 * (sorted[97] + sorted[98]));
  }
}

TEST_CASE("interval lies inside the data range and the point estimate is BMM") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Sample s = gaussian_sample(30, seed);
    auto c = config_with(seed);
    c.alpha = 0.5 + 0.1 * static_cast<double>(seed);
    const auto r = bmm::ci_bmm(s, c);
    CHECK(r.lower <= r.upper);
    CHECK(r.lower >= s.stats().min);
    CHECK(r.upper <= s.stats().max);
    CHECK(r.point_estimate == bmm::bmm(s, {c.alpha, std::nullopt, seed}).estimate);
  }
}

TEST_CASE("intervals are deterministic and independent of worker count") {
  const Sample s = gaussian_sample(50, 6);
  for (bool fixed : {true, false}) {
    auto c = config_with(7);
    c.fix_dirichlet_draws = fixed;
    const auto a = bmm::ci_bmm(s, c);
    bmm::set_worker_count(3);
    const auto b = bmm::ci_bmm(s, c);
    bmm::set_worker_count(1);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.point_estimate == b.point_estimate);
  }
}

TEST_CASE("invalid configurations are rejected") {
  const Sample s({1, 2, 3});
  auto c = config_with(1);
  c.B = 1;
  CHECK_THROWS_AS(bmm::ci_bmm(s, c), bmm::ConfigError);
  c = config_with(1);
  c.level_complement = 0.0;
  CHECK_THROWS_AS(bmm::ci_bmm(s, c), bmm::ConfigError);
  c.level_complement = 1.0;
  CHECK_THROWS_AS(bmm::ci_bmm(s, c), bmm::ConfigError);
  c = config_with(1);
  c.J = 0;
  CHECK_THROWS_AS(bmm::ci_bmm(s, c), bmm::ConfigError);
}

TEST_CASE("point estimate lies inside the interval almost always") {
  int inside = 0;
  const int instances = 200;
  for (int k = 0; k < instances; ++k) {
    auto stream = bmm::derive_substream(8, static_cast<std::uint64_t>(k));
    const Sample s = bmm::sample_distribution(bmm::dist::Exponential{1.0, 0.0}, 40, stream);
    const auto r = bmm::ci_bmm(s, config_with(static_cast<std::uint64_t>(k), 200));
    inside += r.lower <= r.point_estimate && r.point_estimate <= r.upper;
  }
  CHECK(inside >= 0.99 * instances);
}

TEST_CASE("fixing the Dirichlet draws barely moves the endpoints") {
  std::vector<double> shifts;
  for (int k = 0; k < 100; ++k) {
    const Sample s = gaussian_sample(100, 100 + static_cast<std::uint64_t>(k));
    auto c = config_with(static_cast<std::uint64_t>(k), 1000);
    const auto fixed = bmm::ci_bmm(s, c);
    c.fix_dirichlet_draws = false;
    const auto fresh = bmm::ci_bmm(s, c);
    const double width = fixed.upper - fixed.lower;
    shifts.push_back(std::abs(fixed.lower - fresh.lower) / width);
    shifts.push_back(std::abs(fixed.upper - fresh.upper) / width);
  }
  CHECK(oracle::sorted_median(shifts) < 0.10);
}

TEST_CASE("coverage report bookkeeping") {
  auto c = config_with(9, 200);
  const auto one = bmm::coverage_experiment(bmm::dist::Normal{0.0, 1.0}, 30, c, 1, 10);
  CHECK((one.empirical == 0.0 || one.empirical == 1.0));
  const auto r = bmm::coverage_experiment(bmm::dist::Normal{0.0, 1.0}, 30, c, 100, 11);
  CHECK(r.nominal == 0.95);
  CHECK(r.n_draws == 100);
  CHECK(r.empirical == 1.0 - static_cast<double>(r.misses_low + r.misses_high) / 100.0);
  CHECK(r.empirical > 0.8);
}
