#include "bmm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "bmm/error.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"

namespace bmm {
namespace {

constexpr std::uint64_t kDataTag = 31;
constexpr std::uint64_t kEstimatorTag = 32;

// Mean and its standard error (the jackknife of a mean is sd / sqrt(R)).
std::pair<double, double> mean_and_se(const std::vector<double>& v) {
  const double R = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / R;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (R - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(R)};
}

}  // namespace

const EstimatorSummary& SimulationReport::at(Method m) const {
  for (const auto& e : estimators) {
    if (e.method == m) return e;
  }
  throw ConfigError("estimator not part of this simulation");
}

SimulationReport run_simulation(const SimulationSpec& spec) {
  if (spec.replications < 2) throw ConfigError("need at least two replications");
  if (spec.estimators.empty()) throw ConfigError("no estimators requested");
  if (spec.n == 0) throw ConfigError("n must be positive");
  spec.config.validate();
  const double theta = true_mean(spec.dist);
  const std::size_t E = spec.estimators.size();
  const std::size_t R = spec.replications;

  // estimates[e * R + r]
  std::vector<double> estimates(E * R);
  const std::uint64_t data_seed = mix_seed(spec.seed, kDataTag);
  const std::uint64_t est_seed = mix_seed(spec.seed, kEstimatorTag);
  parallel_for(R, [&](std::size_t r) {
    RngStream stream = derive_substream(data_seed, r);
    const Sample sample = sample_distribution(spec.dist, spec.n, stream);
    EstimatorConfig config = spec.config;
    config.seed = mix_seed(est_seed, r);
    for (std::size_t e = 0; e < E; ++e) {
      estimates[e * R + r] = run_estimator(spec.estimators[e], sample, config, spec.g);
    }
  });

  SimulationReport report;
  report.true_mean = theta;
  std::vector<double> reference_error;
  if (const auto it = std::find(spec.estimators.begin(), spec.estimators.end(), Method::Mean);
      it != spec.estimators.end()) {
    const std::size_t e = static_cast<std::size_t>(it - spec.estimators.begin());
    reference_error.resize(R);
    for (std::size_t r = 0; r < R; ++r) reference_error[r] = std::abs(estimates[e * R + r] - theta);
  }
  for (std::size_t e = 0; e < E; ++e) {
    EstimatorSummary s;
    s.method = spec.estimators[e];
    std::vector<double> err(R), sq(R), ab(R);
    for (std::size_t r = 0; r < R; ++r) {
      err[r] = estimates[e * R + r] - theta;
      sq[r] = err[r] * err[r];
      ab[r] = std::abs(err[r]);
    }
    std::tie(s.mse, s.mse_se) = mean_and_se(sq);
    std::tie(s.mad, s.mad_se) = mean_and_se(ab);
    double bias_se = 0.0;
    std::tie(s.bias, bias_se) = mean_and_se(err);
    s.std = bias_se * std::sqrt(static_cast<double>(R));
    if (!reference_error.empty()) {
      std::size_t wins = 0;
      for (std::size_t r = 0; r < R; ++r) wins += ab[r] < reference_error[r];
      report.wins[s.method] = wins;
    }
    if (spec.keep_estimates) {
      s.estimates.assign(estimates.begin() + static_cast<std::ptrdiff_t>(e * R),
                         estimates.begin() + static_cast<std::ptrdiff_t>((e + 1) * R));
    }
    report.estimators.push_back(std::move(s));
  }
  return report;
}

}  // namespace bmm
