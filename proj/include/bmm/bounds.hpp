#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "bmm/distributions.hpp"
#include "bmm/sample.hpp"

namespace bmm {

struct BoundReport {
  double bound_value = 0.0;
  double empirical_value = 0.0;
  std::size_t n_trials = 0;
  bool satisfied = false;  // empirical_value <= bound_value + 3 * standard_error
  double standard_error = 0.0;
};

BoundReport make_bound_report(double bound, double empirical, std::size_t trials, double se);

/// Probability bounds keep the raw formula value next to its clamp to [0, 1].
struct ProbabilityBound {
  double raw = 0.0;
  double clamped = 0.0;
};

// Closed-form calculators.

/// |median - mean| <= sigma.
double mean_median_gap_bound(double sigma);

/// |median - mean| under exponential concentration with constants (a, b):
/// min(sqrt(a b), a sqrt(pi b) / 2).
double exponential_concentration_gap_bound(double a, double b);

/// 6 sigma sqrt(log(1/delta) / n), delta in (0, 1].
double mm_deviation_bound(double sigma, std::size_t n, double delta);

/// 2 exp(-2 J t^2 C^2).
ProbabilityBound bmm_small_t_bound(std::size_t J, double t, double C);

/// (4 sqrt(V) / t)^{J/2}; throws DomainError unless t > 2 sqrt(V).
ProbabilityBound bmm_large_t_bound(std::size_t J, double t, double cond_var);

struct MedianBiasBounds {
  double unconditional = 0.0;  // sqrt(sigma2 / n * n (alpha + 1) / (n alpha + 1))
  double conditional = 0.0;    // sqrt(s2 / (n alpha + 1))
};

/// From population parameters; the conditional bound uses sigma2 in place of s2.
MedianBiasBounds median_bias_bounds(double sigma2, std::size_t n, double alpha);
/// From a sample; the unconditional bound plugs in s2 for sigma2.
MedianBiasBounds median_bias_bounds(const Sample& sample, double alpha);

/// sqrt(pi / 2J) / C_tilde + 2/(J-2) * 4 n^{-J/4} sigma / sqrt(alpha)
///   + sqrt(sigma2 / (n alpha + 1)). Throws DomainError when J <= 2.
double bias_bound_total(std::size_t J, std::size_t n, double alpha, double sigma2,
                        double C_tilde);

/// bias_bound_total + sqrt(sigma2 / n).
double l1_error_bound(std::size_t J, std::size_t n, double alpha, double sigma2,
                      double C_tilde);

// Monte-Carlo experiments. Every trial uses its own derived substreams.

/// Fraction of trials in which the median of means (g = ceil(8 log(1/delta))
/// blocks) misses the true mean by more than mm_deviation_bound, compared
/// against delta.
BoundReport mm_deviation_experiment(const DistributionSpec& dist, std::size_t n, double delta,
                                    std::size_t trials, std::uint64_t seed);

/// Frequency of |BMM - m| > t on a fixed sample, compared against the
/// clamped small-t bound. Without `C` the density minimum over [m - t, m + t]
/// on a 101-point grid is used (requires a supported density branch).
BoundReport bmm_small_t_experiment(const Sample& sample, double alpha, std::size_t J, double t,
                                   std::size_t trials, std::uint64_t seed,
                                   std::optional<double> C = std::nullopt);

/// Frequency of |BMM - m| > t compared against the clamped large-t bound.
BoundReport bmm_large_t_experiment(const Sample& sample, double alpha, std::size_t J, double t,
                                   std::size_t trials, std::uint64_t seed);

/// |E[BMM] - theta| over fresh datasets, against bias_bound_total. The
/// density constant is the grid minimum of the density over
/// [m, m + 4 sqrt(s2 / alpha)] cut to the support, averaged as E[1/C] over
/// the first `constant_trials` datasets.
BoundReport bias_experiment(const DistributionSpec& dist, std::size_t n, double alpha,
                            std::size_t J, std::size_t trials, std::uint64_t seed,
                            std::size_t constant_trials = 50);

/// Empirical variance of BMM over independent weight draws on a fixed
/// sample against 1/(4 J f(m)^2). `satisfied` is only the one-sided check;
/// callers wanting agreement compare the two values directly.
BoundReport median_clt_check(const Sample& sample, double alpha, std::size_t J,
                             std::size_t trials, std::uint64_t seed = 0);

/// |population median - mean| against the standard deviation.
BoundReport mean_median_gap_check(const DistributionSpec& dist);

struct MSEIdentityReport {
  double lhs = 0.0;
  double mse_mean = 0.0;
  double discrepancy = 0.0;
  double correlation = 0.0;
  double var_mean = 0.0;
  double var_p = 0.0;
  double identity_residual = 0.0;
  double residual_standard_error = 0.0;  // jackknife over trials
  std::size_t trials = 0;
};

MSEIdentityReport mse_identity_experiment(const DistributionSpec& dist, std::size_t n,
                                          double alpha, std::size_t J, std::size_t trials,
                                          std::uint64_t seed);

}  // namespace bmm
