#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bmm/dirichlet_mean.hpp"
#include "bmm/error.hpp"
#include "bmm/estimators.hpp"
#include "bmm/order_stats.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"
#include "bmm/sample.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using bmm::Sample;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  bmm::RngStream s(seed, 0);
  std::vector<double> v(n);
  for (double& x : v) x = scale * (s.normal() + 0.5 * s.exponential());
  return v;
}

}  // namespace

TEST_CASE("summary_stats uses the 1/n conventions") {
  const auto a = bmm::summary_stats(Sample({1, 2, 3}));
  CHECK(a.mean == 2.0);
  CHECK_THAT(a.variance_biased, WithinRel(2.0 / 3.0, 1e-15));
  CHECK_THAT(a.skewness, WithinAbs(0.0, 1e-15));

  const auto b = bmm::summary_stats(Sample({0, 0, 3}));
  CHECK_THAT(b.mean, WithinRel(1.0, 1e-15));
  CHECK_THAT(b.variance_biased, WithinRel(2.0, 1e-15));
  CHECK_THAT(b.skewness, WithinRel(2.0 / std::pow(2.0, 1.5), 1e-14));

  const auto c = bmm::summary_stats(Sample({5, 5, 5, 5}));
  CHECK(c.mean == 5.0);
  CHECK(c.variance_biased == 0.0);
  CHECK(c.skewness == 0.0);
}

TEST_CASE("summary statistics invariants on random samples") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto v = random_values(3 + seed, seed);
    const auto s = bmm::summary_stats(Sample(v));
    CHECK(s.variance_biased >= 0.0);
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    // Mirror the sample about its mean: skewness must vanish.
    std::vector<double> mirrored = v;
    for (double x : v) mirrored.push_back(2.0 * s.mean - x);
    CHECK_THAT(bmm::summary_stats(Sample(mirrored)).skewness, WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("Sample rejects empty and non-finite input") {
  CHECK_THROWS_AS(Sample({}), bmm::EmptyInput);
  CHECK_THROWS_AS(Sample({1.0, NAN}), bmm::DomainError);
  CHECK_THROWS_AS(Sample({INFINITY}), bmm::DomainError);
}

TEST_CASE("sample_mean") {
  CHECK(bmm::sample_mean(Sample({1, 2, 3})) == 2.0);
  CHECK(bmm::sample_mean(Sample({-5})) == -5.0);
  const auto v = random_values(100, 7, 1e3);
  CHECK_THAT(bmm::sample_mean(Sample(v)), WithinRel(oracle::mean(v), 1e-12));
}

TEST_CASE("sample_median") {
  CHECK(bmm::sample_median(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(bmm::sample_median(std::vector<double>{1, 2, 3, 4}) == 2.5);
  const auto v = random_values(101, 11);
  const auto before = v;
  CHECK(bmm::sample_median(v) == oracle::order_statistic(v, 51));
  CHECK(v == before);
  CHECK_THROWS_AS(bmm::sample_median(std::vector<double>{}), bmm::EmptyInput);
}

TEST_CASE("quantile_linear interpolates between order statistics") {
  const std::vector<double> v{4, 1, 3, 2, 5};
  CHECK(bmm::quantile_linear(v, 0.0) == 1.0);
  CHECK(bmm::quantile_linear(v, 1.0) == 5.0);
  CHECK_THAT(bmm::quantile_linear(v, 0.3), WithinAbs(2.2, 1e-15));
}

TEST_CASE("bmm on a constant sample returns the constant") {
  const Sample s({4.25, 4.25, 4.25, 4.25, 4.25});
  for (double alpha : {0.01, 1.0, 50.0}) {
    CHECK(bmm::bmm(s, {alpha, 17, 3}).estimate == 4.25);
  }
}

TEST_CASE("bmm with J = 1 returns its single weighted mean") {
  const Sample s(random_values(12, 5));
  const auto r = bmm::bmm(s, {1.0, 1, 99}, true);
  REQUIRE(r.resampled_means);
  REQUIRE(r.resampled_means->size() == 1);
  CHECK(r.estimate == r.resampled_means->front());
}

TEST_CASE("bmm estimate equals the median of the retained means") {
  const Sample s(random_values(30, 6));
  for (std::size_t J : {7u, 8u, 101u}) {
    const auto r = bmm::bmm(s, {0.7, J, 2}, true);
    REQUIRE(r.resampled_means->size() == J);
    CHECK(r.estimate == oracle::sorted_median(*r.resampled_means));
    CHECK(r.config_echo.has_value());
  }
}

TEST_CASE("bmm rejects invalid configurations") {
  const Sample s({1, 2, 3});
  CHECK_THROWS_AS(bmm::bmm(s, {0.0, 5, 0}), bmm::ConfigError);
  CHECK_THROWS_AS(bmm::bmm(s, {-1.0, 5, 0}), bmm::ConfigError);
  CHECK_THROWS_AS(bmm::bmm(s, {1.0, 0, 0}), bmm::ConfigError);
}

TEST_CASE("bmm on [0,0,3] agrees with the simulated conditional median") {
  const Sample s({0, 0, 3});
  const auto m = bmm::conditional_median(s, 1.0);
  REQUIRE(m.method == bmm::MedianMethod::MonteCarlo);
  const double est = bmm::bmm(s, {1.0, 1'000'000, 2024}).estimate;
  // Both are medians of 10^6 independent draws of Y, so they share one
  // standard error and their difference has sqrt(2) times it.
  CHECK(std::abs(est - m.value) <= 3.0 * std::sqrt(2.0) * m.standard_error);
}

TEST_CASE("bmm is deterministic and thread-count independent") {
  const Sample s(random_values(40, 8));
  const auto a = bmm::bmm(s, {0.5, 333, 77}, true);
  const auto b = bmm::bmm(s, {0.5, 333, 77}, true);
  CHECK(a.estimate == b.estimate);
  CHECK(*a.resampled_means == *b.resampled_means);
  bmm::set_worker_count(4);
  const auto c = bmm::bmm(s, {0.5, 333, 77}, true);
  bmm::set_worker_count(1);
  CHECK(a.estimate == c.estimate);
  CHECK(*a.resampled_means == *c.resampled_means);
}

TEST_CASE("abmm") {
  CHECK_THAT(bmm::abmm(Sample({1, 2, 3}), 0.3), WithinAbs(2.0, 1e-15));
  CHECK_THAT(bmm::abmm(Sample({1, 2, 3}), 7.0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(bmm::abmm(Sample({0, 0, 3}), 1.0), WithinRel(14.0 / 15.0, 1e-14));
  CHECK(bmm::abmm(Sample({5, 5, 5, 5}), 0.5) == 5.0);
}

TEST_CASE("median_of_means") {
  CHECK_THAT(bmm::median_of_means(Sample({1, 2, 3, 4, 5, 6}), 3), WithinAbs(3.5, 1e-15));
  CHECK_THAT(bmm::median_of_means(Sample({1, 2, 3, 4, 5, 6, 7}), 3), WithinAbs(4.5, 1e-15));
  const auto v = random_values(23, 3);
  CHECK_THAT(bmm::median_of_means(Sample(v), 1), WithinRel(oracle::mean(v), 1e-14));
  CHECK_THROWS_AS(bmm::median_of_means(Sample({1, 2}), 3), bmm::ConfigError);
  CHECK_THROWS_AS(bmm::median_of_means(Sample({1, 2}), 0), bmm::ConfigError);
}

TEST_CASE("median_of_means depends on the order of the data") {
  CHECK_THAT(bmm::median_of_means(Sample({1, 2, 3, 4, 5, 6}), 3), WithinAbs(3.5, 1e-15));
  CHECK_THAT(bmm::median_of_means(Sample({1, 6, 2, 5, 3, 4}), 3), WithinAbs(3.5, 1e-15));
  CHECK_THAT(bmm::median_of_means(Sample({1, 2, 6, 3, 4, 5}), 3), WithinAbs(4.5, 1e-15));
}

TEST_CASE("hodges_lehmann") {
  CHECK(bmm::hodges_lehmann(Sample({1, 2, 3})) == 2.0);
  CHECK(bmm::hodges_lehmann(Sample({0, 0, 2})) == 1.0);
  CHECK(bmm::hodges_lehmann(Sample({-2.5, -2.5, -2.5, -2.5})) == -2.5);
  CHECK_THROWS_AS(bmm::hodges_lehmann(Sample({1})), bmm::ConfigError);

  // Brute-force oracle over all pairs.
  const auto v = random_values(25, 12);
  std::vector<double> pairs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) pairs.push_back(0.5 * (v[i] + v[j]));
  }
  CHECK(bmm::hodges_lehmann(Sample(v)) == oracle::sorted_median(pairs));
}

TEST_CASE("method names round-trip") {
  for (auto m : {bmm::Method::Mean, bmm::Method::Median, bmm::Method::BMM, bmm::Method::ABMM,
                 bmm::Method::MM, bmm::Method::HL}) {
    CHECK(bmm::parse_method(bmm::method_name(m)) == m);
  }
  CHECK(bmm::parse_method("BMM") == bmm::Method::BMM);
  CHECK_THROWS_AS(bmm::parse_method("trimmed"), bmm::ConfigError);
}

TEST_CASE("every estimator is translation and scale equivariant") {
  const std::vector<bmm::Method> methods{bmm::Method::Mean, bmm::Method::Median, bmm::Method::BMM,
                                         bmm::Method::ABMM, bmm::Method::MM,     bmm::Method::HL};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = random_values(10 + seed, seed);
    const bmm::EstimatorConfig config{0.3 + 0.2 * static_cast<double>(seed), 51, seed};
    for (double c : {-3.0, 0.5, 1e3}) {
      std::vector<double> shifted = v, scaled = v;
      for (double& x : shifted) x += c;
      for (double& x : scaled) x *= c;
      for (auto m : methods) {
        const double base = bmm::run_estimator(m, Sample(v), config);
        const double tol = 1e-10 * (1.0 + std::abs(c));
        CHECK_THAT(bmm::run_estimator(m, Sample(shifted), config), WithinAbs(base + c, tol));
        CHECK_THAT(bmm::run_estimator(m, Sample(scaled), config), WithinAbs(c * base, tol));
      }
    }
  }
}

TEST_CASE("bmm stays inside the sample range") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto v = random_values(2 + seed % 9, seed);
    const Sample s(v);
    for (double alpha : {0.001, 0.1, 1.0, 10.0}) {
      const double est = bmm::bmm(s, {alpha, 25, seed}).estimate;
      CHECK(est >= s.stats().min);
      CHECK(est <= s.stats().max);
    }
  }
}

TEST_CASE("bmm approaches the mean as alpha grows") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sample s(random_values(20, seed));
    const double alpha = 1e6;
    const double tol = 10.0 * std::sqrt(s.stats().variance_biased / (20.0 * alpha + 1.0));
    CHECK(std::abs(bmm::bmm(s, {alpha, 100'000, seed}).estimate - s.stats().mean) <= tol);
  }
}

TEST_CASE("order-free estimators are invariant to permutations") {
  auto v = random_values(31, 21);
  const Sample s(v);
  std::reverse(v.begin(), v.end());
  std::rotate(v.begin(), v.begin() + 7, v.end());
  const Sample p(v);
  CHECK_THAT(bmm::sample_mean(p), WithinRel(bmm::sample_mean(s), 1e-14));
  CHECK(bmm::sample_median(p.values()) == bmm::sample_median(s.values()));
  CHECK(bmm::hodges_lehmann(p) == bmm::hodges_lehmann(s));
  CHECK_THAT(bmm::abmm(p, 1.0), WithinRel(bmm::abmm(s, 1.0), 1e-13));
}
