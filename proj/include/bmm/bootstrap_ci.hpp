#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bmm/distributions.hpp"
#include "bmm/sample.hpp"

namespace bmm {

struct CIConfig {
  double level_complement = 0.05;
  std::size_t B = 1000;
  std::optional<std::size_t> J;  // defaults to the sample size
  double alpha = 1.0;
  std::uint64_t seed = 0;
  bool fix_dirichlet_draws = true;
  bool retain_estimates = false;

  /// Throws ConfigError unless 0 < level_complement < 1, B >= 2, alpha > 0
  /// and J >= 1.
  void validate() const;
};

struct CIResult {
  double lower = 0.0;
  double upper = 0.0;
  double point_estimate = 0.0;
  std::optional<std::vector<double>> bootstrap_estimates;
};

/// Percentile bootstrap interval for BMM. Each replicate resamples the data
/// with replacement and recomputes BMM. With fixed draws the J weight vectors
/// are drawn once (the same vectors bmm() uses for this seed) and reused in
/// every replicate. Endpoints are the level_complement/2 and
/// 1 - level_complement/2 quantiles of the replicates, interpolated linearly
/// between order statistics.
CIResult ci_bmm(const Sample& sample, const CIConfig& config);

struct CoverageReport {
  double nominal = 0.0;
  double empirical = 0.0;
  std::size_t n_draws = 0;
  std::size_t misses_low = 0;   // true mean below the interval
  std::size_t misses_high = 0;  // true mean above the interval
};

/// Draws n_draws datasets, builds an interval on each and counts how often
/// the true mean is covered.
CoverageReport coverage_experiment(const DistributionSpec& dist, std::size_t n,
                                   const CIConfig& config, std::size_t n_draws,
                                   std::uint64_t seed);

}  // namespace bmm
