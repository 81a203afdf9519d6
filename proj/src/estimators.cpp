#include "bmm/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bmm/dirichlet.hpp"
#include "bmm/error.hpp"
#include "bmm/order_stats.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"

namespace bmm {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Mean: return "mean";
    case Method::Median: return "median";
    case Method::BMM: return "bmm";
    case Method::ABMM: return "abmm";
    case Method::MM: return "mm";
    case Method::HL: return "hl";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Method m : {Method::Mean, Method::Median, Method::BMM, Method::ABMM, Method::MM,
                   Method::HL}) {
    if (lower == method_name(m)) return m;
  }
  throw ConfigError("unknown estimator: " + std::string(name));
}

void EstimatorConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (J && *J == 0) throw ConfigError("J must be at least 1");
}

double sample_mean(const Sample& sample) { return sample.stats().mean; }

EstimateReport bmm(const Sample& sample, const EstimatorConfig& config, bool retain_means) {
  config.validate();
  const std::size_t draws = config.draws_for(sample.size());
  EstimateReport report;
  report.method = Method::BMM;
  report.config_echo = config;

  std::vector<double> means(draws);
  if (sample.is_constant()) {
    std::fill(means.begin(), means.end(), sample[0]);
  } else {
    const auto values = sample.values();
    const double lo = sample.stats().min;
    const double hi = sample.stats().max;
    parallel_for(draws, [&](std::size_t j) {
      RngStream stream = derive_substream(config.seed, j);
      means[j] = std::clamp(draw_dirichlet_mean(values, config.alpha, stream), lo, hi);
    });
  }
  if (retain_means) {
    report.resampled_means = means;
  }
  report.estimate = median_in_place(means);
  return report;
}

double abmm(const Sample& sample, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const SummaryStats& s = sample.stats();
  if (s.variance_biased == 0.0 || s.skewness == 0.0) return s.mean;
  const double n = static_cast<double>(sample.size());
  return s.mean - std::sqrt(s.variance_biased) * s.skewness / (3.0 * (n * alpha + 2.0));
}

double median_of_means(const Sample& sample, std::size_t g) {
  const std::size_t n = sample.size();
  if (g < 1 || g > n) throw ConfigError("number of blocks must lie in [1, n]");
  if (sample.is_constant()) return sample[0];
  if (g == 1) return sample.stats().mean;
  const std::size_t base = n / g;
  const std::size_t extra = n % g;
  std::vector<double> block_means;
  block_means.reserve(g);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < g; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    double acc = 0.0;
    for (std::size_t i = pos; i < pos + len; ++i) acc += sample[i];
    block_means.push_back(acc / static_cast<double>(len));
    pos += len;
  }
  return median_in_place(block_means);
}

double hodges_lehmann(const Sample& sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw ConfigError("Hodges-Lehmann needs at least two values");
  if (sample.is_constant()) return sample[0];
  std::vector<double> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back(0.5 * (sample[i] + sample[j]));
  }
  return median_in_place(pairs);
}

double run_estimator(Method method, const Sample& sample, const EstimatorConfig& config,
                     std::size_t g) {
  switch (method) {
    case Method::Mean: return sample_mean(sample);
    case Method::Median: return sample_median(sample.values());
    case Method::BMM: return bmm(sample, config).estimate;
    case Method::ABMM: return abmm(sample, config.alpha);
    case Method::MM: return median_of_means(sample, g);
    case Method::HL: return hodges_lehmann(sample);
  }
  throw ConfigError("unknown estimator");
}

}  // namespace bmm
