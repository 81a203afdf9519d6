#include "bmm/bootstrap_ci.hpp"

#include <algorithm>
#include <cmath>

#include "bmm/dirichlet.hpp"
#include "bmm/error.hpp"
#include "bmm/estimators.hpp"
#include "bmm/order_stats.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"

namespace bmm {
namespace {

constexpr std::uint64_t kResampleTag = 11;
constexpr std::uint64_t kFreshWeightTag = 12;
constexpr std::uint64_t kCoverageDataTag = 13;
constexpr std::uint64_t kCoverageIntervalTag = 14;

}  // namespace

void CIConfig::validate() const {
  if (!(level_complement > 0.0 && level_complement < 1.0)) {
    throw ConfigError("level complement must lie in (0, 1)");
  }
  if (B < 2) throw ConfigError("need at least two bootstrap replicates");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (J && *J == 0) throw ConfigError("J must be at least 1");
}

CIResult ci_bmm(const Sample& sample, const CIConfig& config) {
  config.validate();
  const std::size_t n = sample.size();
  const std::size_t J = config.J.value_or(n);
  const auto values = sample.values();

  CIResult result;
  result.point_estimate = bmm(sample, {config.alpha, J, config.seed}).estimate;

  // Row j holds the weight vector bmm() draws from derive_substream(seed, j).
  std::vector<double> weights;
  if (config.fix_dirichlet_draws) {
    weights.resize(J * n);
    parallel_for(J, [&](std::size_t j) {
      RngStream stream = derive_substream(config.seed, j);
      fill_symmetric_dirichlet(std::span<double>(weights).subspan(j * n, n), config.alpha, stream);
    });
  }

  const std::uint64_t resample_seed = mix_seed(config.seed, kResampleTag);
  const std::uint64_t fresh_seed = mix_seed(config.seed, kFreshWeightTag);
  std::vector<double> estimates(config.B);
  parallel_for(config.B, [&](std::size_t b) {
    RngStream stream = derive_substream(resample_seed, b);
    std::vector<double> resampled(n);
    for (double& v : resampled) v = values[stream.uniform_index(n)];
    if (!config.fix_dirichlet_draws) {
      estimates[b] = bmm(Sample(std::move(resampled)), {config.alpha, J, mix_seed(fresh_seed, b)}).estimate;
      return;
    }
    const auto [lo, hi] = std::minmax_element(resampled.begin(), resampled.end());
    std::vector<double> means(J);
    for (std::size_t j = 0; j < J; ++j) {
      const double* row = weights.data() + j * n;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += row[i] * resampled[i];
      means[j] = std::clamp(acc, *lo, *hi);
    }
    estimates[b] = median_in_place(means);
  });

  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  result.lower = quantile_linear_sorted(sorted, config.level_complement / 2.0);
  result.upper = quantile_linear_sorted(sorted, 1.0 - config.level_complement / 2.0);
  if (config.retain_estimates) result.bootstrap_estimates = std::move(estimates);
  return result;
}

CoverageReport coverage_experiment(const DistributionSpec& dist, std::size_t n,
                                   const CIConfig& config, std::size_t n_draws,
                                   std::uint64_t seed) {
  config.validate();
  if (n_draws == 0) throw ConfigError("coverage needs at least one draw");
  const double theta = true_mean(dist);
  std::vector<signed char> side(n_draws, 0);
  parallel_for(n_draws, [&](std::size_t d) {
    RngStream stream = derive_substream(mix_seed(seed, kCoverageDataTag), d);
    const Sample sample = sample_distribution(dist, n, stream);
    CIConfig local = config;
    local.retain_estimates = false;
    local.seed = mix_seed(mix_seed(seed, kCoverageIntervalTag), d);
    const CIResult ci = ci_bmm(sample, local);
    if (theta < ci.lower) side[d] = -1;
    if (theta > ci.upper) side[d] = 1;
  });
  CoverageReport report;
  report.nominal = 1.0 - config.level_complement;
  report.n_draws = n_draws;
  report.misses_low = static_cast<std::size_t>(std::count(side.begin(), side.end(), -1));
  report.misses_high = static_cast<std::size_t>(std::count(side.begin(), side.end(), 1));
  report.empirical = 1.0 - static_cast<double>(report.misses_low + report.misses_high) /
                               static_cast<double>(n_draws);
  return report;
}

}  // namespace bmm
