#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmm/sample.hpp"

namespace bmm {

enum class Method { Mean, Median, BMM, ABMM, MM, HL };

std::string_view method_name(Method m);
/// Accepts mean, median, bmm, abmm, mm, hl (case-insensitive). Throws
/// ConfigError otherwise.
Method parse_method(std::string_view name);

struct EstimatorConfig {
  double alpha = 1.0;
  std::optional<std::size_t> J;  // defaults to the sample size
  std::uint64_t seed = 0;

  std::size_t draws_for(std::size_t n) const { return J.value_or(n); }
  /// Throws ConfigError unless alpha > 0 (finite) and J >= 1.
  void validate() const;
};

struct EstimateReport {
  double estimate = 0.0;
  Method method = Method::Mean;
  std::optional<EstimatorConfig> config_echo;
  std::optional<std::vector<double>> resampled_means;
};

double sample_mean(const Sample& sample);

/// Median of J Dirichlet-weighted means. Weight vector j is drawn from
/// derive_substream(seed, j), so the result does not depend on the number
/// of worker threads. At alpha = 1 the weights are normalized unit
/// exponentials.
EstimateReport bmm(const Sample& sample, const EstimatorConfig& config,
                   bool retain_means = false);

/// Skewness-corrected sample mean: mean - sqrt(s2) * skew / (3 (n alpha + 2)).
double abmm(const Sample& sample, double alpha);

/// Median of the means of g consecutive blocks; the first n mod g blocks get
/// one extra element. Throws ConfigError unless 1 <= g <= n.
double median_of_means(const Sample& sample, std::size_t g);

/// Median of the n(n-1)/2 pairwise averages with i < j. Throws ConfigError
/// when n < 2.
double hodges_lehmann(const Sample& sample);

/// Runs one estimator by tag. `g` is used only by MM.
double run_estimator(Method method, const Sample& sample, const EstimatorConfig& config,
                     std::size_t g = 3);

}  // namespace bmm
