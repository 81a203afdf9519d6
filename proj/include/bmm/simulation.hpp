#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bmm/distributions.hpp"
#include "bmm/estimators.hpp"

namespace bmm {

struct SimulationSpec {
  DistributionSpec dist;
  std::size_t n = 100;
  std::vector<Method> estimators{Method::Mean, Method::BMM};
  EstimatorConfig config;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  std::size_t g = 3;  // median-of-means blocks
  bool keep_estimates = false;
};

struct EstimatorSummary {
  Method method = Method::Mean;
  double mse = 0.0;
  double mad = 0.0;   // mean absolute error
  double bias = 0.0;
  double std = 0.0;   // standard deviation of the estimates
  double mse_se = 0.0;
  double mad_se = 0.0;
  std::vector<double> estimates;  // per replication, when requested
};

struct SimulationReport {
  double true_mean = 0.0;
  std::vector<EstimatorSummary> estimators;
  /// Replications in which the estimator's absolute error was strictly
  /// below the sample mean's.
  std::map<Method, std::size_t> wins;

  const EstimatorSummary& at(Method m) const;
};

/// Replication r draws its data from a substream keyed only by (seed, r) and
/// feeds the same data to every estimator. Standard errors are jackknife
/// over replications.
SimulationReport run_simulation(const SimulationSpec& spec);

}  // namespace bmm
