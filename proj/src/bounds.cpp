#include "bmm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bmm/dirichlet_mean.hpp"
#include "bmm/error.hpp"
#include "bmm/estimators.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"

namespace bmm {
namespace {

constexpr std::uint64_t kDataTag = 1;
constexpr std::uint64_t kWeightTag = 2;
constexpr int kDensityGrid = 101;

RngStream data_stream(std::uint64_t seed, std::size_t trial) {
  return derive_substream(mix_seed(seed, kDataTag), trial);
}

std::uint64_t weight_seed(std::uint64_t seed, std::size_t trial) {
  return mix_seed(mix_seed(seed, kWeightTag), trial);
}

double frequency_se(double p, std::size_t trials) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

void require_trials(std::size_t trials) {
  if (trials == 0) throw ConfigError("experiment needs at least one trial");
}

// Minimum of the density over evenly spaced grid points in [lo, hi],
// skipping sample values.
double density_grid_min(const DensitySpec& spec, double lo, double hi) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kDensityGrid; ++k) {
    const double y = lo + (hi - lo) * k / (kDensityGrid - 1);
    try {
      best = std::min(best, density_y(spec, y));
    } catch (const AtomError&) {
    }
  }
  return best;
}

// Same minimum when no density formula applies: a box-kernel estimate from
// simulated draws, with half-width 1% of the sample range.
double simulated_density_grid_min(const Sample& sample, double alpha, double lo, double hi,
                                  std::uint64_t seed) {
  constexpr std::size_t kDraws = 100'000;
  std::vector<double> y = simulate_dirichlet_means(sample, alpha, kDraws, seed);
  std::sort(y.begin(), y.end());
  const double h = 0.01 * (sample.stats().max - sample.stats().min);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kDensityGrid; ++k) {
    const double c = lo + (hi - lo) * k / (kDensityGrid - 1);
    const auto a = std::lower_bound(y.begin(), y.end(), c - h);
    const auto b = std::upper_bound(y.begin(), y.end(), c + h);
    best = std::min(best, static_cast<double>(b - a) / (2.0 * h * static_cast<double>(kDraws)));
  }
  return best;
}

// Frequency of |BMM - m| > t over independent weight draws on one sample.
double exceedance_frequency(const Sample& sample, double alpha, std::size_t J, double m,
                            double t, std::size_t trials, std::uint64_t seed) {
  std::vector<char> exceed(trials);
  parallel_for(trials, [&](std::size_t r) {
    EstimatorConfig config{alpha, J, weight_seed(seed, r)};
    exceed[r] = std::abs(bmm(sample, config).estimate - m) > t;
  });
  const auto hits = std::count(exceed.begin(), exceed.end(), char{1});
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

BoundReport make_bound_report(double bound, double empirical, std::size_t trials, double se) {
  BoundReport r;
  r.bound_value = bound;
  r.empirical_value = empirical;
  r.n_trials = trials;
  r.standard_error = se;
  r.satisfied = empirical <= bound + 3.0 * se;
  return r;
}

double mean_median_gap_bound(double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("sigma must be nonnegative");
  return sigma;
}

double exponential_concentration_gap_bound(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("concentration constants must be positive");
  return std::min(std::sqrt(a * b), a * std::sqrt(std::numbers::pi * b) / 2.0);
}

double mm_deviation_bound(double sigma, std::size_t n, double delta) {
  if (!(sigma >= 0.0) || n == 0 || !(delta > 0.0 && delta <= 1.0)) {
    throw DomainError("mm_deviation_bound needs sigma >= 0, n >= 1, delta in (0, 1]");
  }
  return 6.0 * sigma * std::sqrt(std::log(1.0 / delta) / static_cast<double>(n));
}

ProbabilityBound bmm_small_t_bound(std::size_t J, double t, double C) {
  if (J == 0 || !(t >= 0.0) || !(C > 0.0)) throw DomainError("small-t bound needs J >= 1, t >= 0, C > 0");
  const double raw = 2.0 * std::exp(-2.0 * static_cast<double>(J) * t * t * C * C);
  return {raw, std::min(raw, 1.0)};
}

ProbabilityBound bmm_large_t_bound(std::size_t J, double t, double cond_var) {
  if (J == 0 || !(cond_var >= 0.0)) throw DomainError("large-t bound needs J >= 1, V >= 0");
  if (!(t > 2.0 * std::sqrt(cond_var))) throw DomainError("large-t bound needs t > 2 sqrt(V)");
  const double raw = std::pow(4.0 * std::sqrt(cond_var) / t, static_cast<double>(J) / 2.0);
  return {raw, std::min(raw, 1.0)};
}

MedianBiasBounds median_bias_bounds(double sigma2, std::size_t n, double alpha) {
  if (!(sigma2 >= 0.0) || n == 0 || !(alpha > 0.0)) throw DomainError("invalid bias-bound inputs");
  const double na = static_cast<double>(n) * alpha;
  return {std::sqrt(sigma2 / static_cast<double>(n) * static_cast<double>(n) * (alpha + 1.0) / (na + 1.0)),
          std::sqrt(sigma2 / (na + 1.0))};
}

MedianBiasBounds median_bias_bounds(const Sample& sample, double alpha) {
  return median_bias_bounds(sample.stats().variance_biased, sample.size(), alpha);
}

double bias_bound_total(std::size_t J, std::size_t n, double alpha, double sigma2,
                        double C_tilde) {
  if (J <= 2) throw DomainError("bias bound needs J > 2");
  if (n == 0 || !(alpha > 0.0) || !(sigma2 >= 0.0) || !(C_tilde > 0.0)) {
    throw DomainError("invalid bias-bound inputs");
  }
  const double j = static_cast<double>(J);
  const double nn = static_cast<double>(n);
  const double sampling = std::sqrt(std::numbers::pi / (2.0 * j)) / C_tilde;
  const double tail = 2.0 / (j - 2.0) * 4.0 * std::pow(nn, -j / 4.0) * std::sqrt(sigma2) /
                      std::sqrt(alpha);
  const double median_gap = std::sqrt(sigma2 / (nn * alpha + 1.0));
  return sampling + tail + median_gap;
}

double l1_error_bound(std::size_t J, std::size_t n, double alpha, double sigma2,
                      double C_tilde) {
  return bias_bound_total(J, n, alpha, sigma2, C_tilde) +
         std::sqrt(sigma2 / static_cast<double>(n));
}

BoundReport mm_deviation_experiment(const DistributionSpec& dist, std::size_t n, double delta,
                                    std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  const double theta = true_mean(dist);
  const double sigma = std::sqrt(variance(dist));
  const double bound = mm_deviation_bound(sigma, n, delta);
  const auto g = static_cast<std::size_t>(
      std::clamp(std::ceil(8.0 * std::log(1.0 / delta)), 1.0, static_cast<double>(n)));
  std::vector<char> exceed(trials);
  parallel_for(trials, [&](std::size_t r) {
    RngStream stream = data_stream(seed, r);
    const Sample sample = sample_distribution(dist, n, stream);
    exceed[r] = std::abs(median_of_means(sample, g) - theta) > bound;
  });
  const double freq = static_cast<double>(std::count(exceed.begin(), exceed.end(), char{1})) /
                      static_cast<double>(trials);
  return make_bound_report(delta, freq, trials, frequency_se(freq, trials));
}

BoundReport bmm_small_t_experiment(const Sample& sample, double alpha, std::size_t J, double t,
                                   std::size_t trials, std::uint64_t seed,
                                   std::optional<double> C) {
  require_trials(trials);
  const double m = conditional_median(sample, alpha).value;
  if (!C) {
    const DensitySpec spec(sample, alpha);
    const double lo = std::max(m - t, sample.stats().min);
    const double hi = std::min(m + t, sample.stats().max);
    C = density_grid_min(spec, lo, hi);
  }
  const double bound = bmm_small_t_bound(J, t, *C).clamped;
  const double freq = exceedance_frequency(sample, alpha, J, m, t, trials, seed);
  return make_bound_report(bound, freq, trials, frequency_se(freq, trials));
}

BoundReport bmm_large_t_experiment(const Sample& sample, double alpha, std::size_t J, double t,
                                   std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  const double bound = bmm_large_t_bound(J, t, conditional_variance(sample, alpha)).clamped;
  const double m = conditional_median(sample, alpha).value;
  const double freq = exceedance_frequency(sample, alpha, J, m, t, trials, seed);
  return make_bound_report(bound, freq, trials, frequency_se(freq, trials));
}

BoundReport bias_experiment(const DistributionSpec& dist, std::size_t n, double alpha,
                            std::size_t J, std::size_t trials, std::uint64_t seed,
                            std::size_t constant_trials) {
  require_trials(trials);
  const double theta = true_mean(dist);
  const double sigma2 = variance(dist);
  std::vector<double> errors(trials);
  std::vector<double> inverse_c(std::min(trials, constant_trials), 0.0);
  parallel_for(trials, [&](std::size_t r) {
    RngStream stream = data_stream(seed, r);
    const Sample sample = sample_distribution(dist, n, stream);
    errors[r] = bmm(sample, {alpha, J, weight_seed(seed, r)}).estimate - theta;
    if (r < inverse_c.size()) {
      const DensitySpec spec(sample, alpha);
      MedianOptions options;
      options.mc_draws = 100'000;
      options.seed = weight_seed(seed, r);
      const double m = conditional_median(sample, alpha, options).value;
      const double t0 = 4.0 * std::sqrt(sample.stats().variance_biased / alpha);
      const double hi = std::min(m + t0, sample.stats().max);
      const double c = spec.branch() == DensityBranch::Unsupported
                           ? simulated_density_grid_min(sample, alpha, m, hi, weight_seed(seed, r))
                           : density_grid_min(spec, m, hi);
      inverse_c[r] = 1.0 / c;
    }
  });
  double mean_error = 0.0;
  for (double e : errors) mean_error += e;
  mean_error /= static_cast<double>(trials);
  double ss = 0.0;
  for (double e : errors) ss += (e - mean_error) * (e - mean_error);
  const double se = std::sqrt(ss / static_cast<double>(trials - (trials > 1 ? 1 : 0))) /
                    std::sqrt(static_cast<double>(trials));
  double mean_inverse_c = 0.0;
  for (double v : inverse_c) mean_inverse_c += v;
  mean_inverse_c /= static_cast<double>(inverse_c.size());
  // The first term of the bound is sqrt(pi/2J * E[1/C]); passing
  // 1/sqrt(E[1/C]) as the constant produces exactly that.
  const double bound = std::isfinite(mean_inverse_c)
                           ? bias_bound_total(J, n, alpha, sigma2, 1.0 / std::sqrt(mean_inverse_c))
                           : std::numeric_limits<double>::infinity();
  return make_bound_report(bound, std::abs(mean_error), trials, se);
}

BoundReport median_clt_check(const Sample& sample, double alpha, std::size_t J,
                             std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  if (sample.is_constant()) return make_bound_report(0.0, 0.0, trials, 0.0);
  const double m = conditional_median(sample, alpha).value;
  const double f = density_y(DensitySpec(sample, alpha), m);
  const double predicted = 1.0 / (4.0 * static_cast<double>(J) * f * f);

  std::vector<double> estimates(trials);
  parallel_for(trials, [&](std::size_t r) {
    estimates[r] = bmm(sample, {alpha, J, weight_seed(seed, r)}).estimate;
  });
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(trials);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double e : estimates) {
    const double d = (e - mean) * (e - mean);
    m2 += d;
    m4 += d * d;
  }
  const double T = static_cast<double>(trials);
  const double var = trials > 1 ? m2 / (T - 1.0) : 0.0;
  const double se = std::sqrt(std::max(0.0, m4 / T - (m2 / T) * (m2 / T)) / T);
  return make_bound_report(predicted, var, trials, se);
}

BoundReport mean_median_gap_check(const DistributionSpec& dist) {
  const double gap = std::abs(population_median(dist) - true_mean(dist));
  const double var = variance(dist);
  const double bound = std::isfinite(var) ? mean_median_gap_bound(std::sqrt(var))
                                          : std::numeric_limits<double>::infinity();
  return make_bound_report(bound, gap, 1, 0.0);
}

MSEIdentityReport mse_identity_experiment(const DistributionSpec& dist, std::size_t n,
                                          double alpha, std::size_t J, std::size_t trials,
                                          std::uint64_t seed) {
  if (trials < 2) throw ConfigError("MSE identity needs at least two trials");
  const double theta = true_mean(dist);
  // Errors of the two estimators on the same data.
  std::vector<double> ep(trials);
  std::vector<double> em(trials);
  parallel_for(trials, [&](std::size_t r) {
    RngStream stream = data_stream(seed, r);
    const Sample sample = sample_distribution(dist, n, stream);
    ep[r] = bmm(sample, {alpha, J, weight_seed(seed, r)}).estimate - theta;
    em[r] = sample_mean(sample) - theta;
  });

  const double T = static_cast<double>(trials);
  double sp = 0.0, sm = 0.0, spp = 0.0, smm = 0.0, spm = 0.0;
  for (std::size_t r = 0; r < trials; ++r) {
    sp += ep[r];
    sm += em[r];
    spp += ep[r] * ep[r];
    smm += em[r] * em[r];
    spm += ep[r] * em[r];
  }
  MSEIdentityReport rep;
  rep.trials = trials;
  const double bp = sp / T;
  const double bm = sm / T;
  rep.lhs = spp / T;
  rep.mse_mean = smm / T;
  rep.discrepancy = (spp - 2.0 * spm + smm) / T;
  rep.var_p = rep.lhs - bp * bp;
  rep.var_mean = rep.mse_mean - bm * bm;
  const double cov = spm / T - bp * bm;
  if (rep.var_p > 0.0 && rep.var_mean > 0.0) {
    rep.correlation = std::clamp(cov / std::sqrt(rep.var_p * rep.var_mean), -1.0, 1.0);
  } else {
    rep.correlation = 1.0;
  }
  const double ratio = rep.var_mean > 0.0 ? std::sqrt(rep.var_p / rep.var_mean) : 0.0;
  rep.identity_residual =
      rep.lhs - (rep.mse_mean + rep.discrepancy -
                 2.0 * rep.var_mean * (1.0 - rep.correlation * ratio));

  // With moments taken over the trials the residual reduces to
  // 2 (b_p - b_m) b_m; its jackknife only needs leave-one-out means.
  double jack_mean = 0.0;
  std::vector<double> jack(trials);
  for (std::size_t r = 0; r < trials; ++r) {
    const double bp_r = (sp - ep[r]) / (T - 1.0);
    const double bm_r = (sm - em[r]) / (T - 1.0);
    jack[r] = 2.0 * (bp_r - bm_r) * bm_r;
    jack_mean += jack[r];
  }
  jack_mean /= T;
  double jack_ss = 0.0;
  for (double v : jack) jack_ss += (v - jack_mean) * (v - jack_mean);
  rep.residual_standard_error = std::sqrt((T - 1.0) / T * jack_ss);
  return rep;
}

}  // namespace bmm
