#include "bmm/dirichlet_mean.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <boost/math/special_functions/sin_pi.hpp>

#include "bmm/dirichlet.hpp"
#include "bmm/error.hpp"
#include "bmm/order_stats.hpp"
#include "bmm/parallel.hpp"
#include "bmm/rng.hpp"

namespace bmm {
namespace {

constexpr unsigned kMaxMomentOrder = 12;
constexpr std::size_t kDrawsPerStream = 1024;
constexpr double kNormalizationTol = 1e-6;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
}

// sum of sin(pi * c_i) * integral over [z_i, min(z_{i+1}, z)] of
// (z - s)^power * prod_k |z_k - s|^{-w_k} ds, over the atoms below z.
double signed_atom_integral(const DensitySpec& spec, double z, double power,
                            const QuadratureConfig& quad) {
  const auto& atoms = spec.atoms();
  const auto& masses = spec.masses();
  std::vector<PowerFactor> factors;
  factors.reserve(atoms.size() + 1);
  for (std::size_t k = 0; k < atoms.size(); ++k) factors.push_back({atoms[k], -masses[k]});
  factors.push_back({z, power});

  double total = 0.0;
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size() && atoms[i] < z; ++i) {
    cumulative += masses[i];
    const double sign = boost::math::sin_pi(cumulative);
    if (sign == 0.0) continue;
    const double upper = std::min(atoms[i + 1], z);
    total += sign * integrate_power_product(atoms[i], upper, factors, quad);
  }
  return total;
}

void require_supported(const DensitySpec& spec) {
  if (spec.branch() == DensityBranch::Unsupported) {
    throw UnsupportedAlpha("no real-valued density formula for this alpha and sample");
  }
}

}  // namespace

double conditional_moment(const Sample& sample, double alpha, unsigned m) {
  check_alpha(alpha);
  if (m > kMaxMomentOrder) throw UnsupportedOrder("moment order above 12 is not supported");
  if (m == 0) return 1.0;
  const double na = static_cast<double>(sample.size()) * alpha;
  // power_sums[j] = sum_i x_i^j
  std::vector<double> power_sums(m + 1, 0.0);
  for (double x : sample.values()) {
    double p = 1.0;
    for (unsigned j = 1; j <= m; ++j) {
      p *= x;
      power_sums[j] += p;
    }
  }
  std::vector<double> moments(m + 1, 0.0);
  moments[0] = 1.0;
  for (unsigned order = 1; order <= m; ++order) {
    double acc = 0.0;
    // coef = Gamma(na + k) / Gamma(na + order) * (order - 1)! / k!, built
    // from k = order - 1 downward as a product of ratios.
    double coef = 1.0 / (na + order - 1);
    for (unsigned k = order; k-- > 0;) {
      acc += coef * moments[k] * alpha * power_sums[order - k];
      if (k > 0) coef *= static_cast<double>(k) / (na + k - 1);
    }
    moments[order] = acc;
  }
  return moments[m];
}

double conditional_variance(const Sample& sample, double alpha) {
  check_alpha(alpha);
  const double na = static_cast<double>(sample.size()) * alpha;
  return sample.stats().variance_biased / (na + 1.0);
}

double unconditional_variance(double sigma2, std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw ConfigError("n must be positive");
  if (!(sigma2 >= 0.0)) throw DomainError("variance must be nonnegative");
  const double na = static_cast<double>(n) * alpha;
  return sigma2 * (alpha + 1.0) / (na + 1.0);
}

DensitySpec::DensitySpec(Sample sample, double alpha)
    : sample_(std::move(sample)), alpha_(alpha), branch_(DensityBranch::Unsupported) {
  check_alpha(alpha);
  const SummaryStats& s = sample_.stats();
  offset_ = s.min;
  range_ = s.max - s.min;

  std::vector<double> sorted(sample_.values().begin(), sample_.values().end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    const double z = range_ > 0.0 ? (v - offset_) / range_ : 0.0;
    if (!atoms_.empty() && z == atoms_.back()) {
      masses_.back() += alpha;
    } else {
      atoms_.push_back(z);
      masses_.push_back(alpha);
    }
  }
  if (range_ > 0.0) atoms_.back() = 1.0;

  const double n = static_cast<double>(sample_.size());
  if (std::abs(alpha - 1.0 / n) < 1e-12) {
    branch_ = DensityBranch::ClosedFormAlphaEqualsOneOverN;
  } else if (alpha > 1.0 / n && alpha < 1.0) {
    // A merged atom of mass >= 1 makes the integral representation diverge.
    const bool light_atoms =
        std::all_of(masses_.begin(), masses_.end(), [](double w) { return w < 1.0; });
    branch_ = light_atoms ? DensityBranch::RealIntegralBranch : DensityBranch::Unsupported;
  }
}

double density_y(const DensitySpec& spec, double y, const QuadratureConfig& quad) {
  require_supported(spec);
  if (spec.range() == 0.0) {
    if (y == spec.offset()) throw AtomError("density evaluated at an atom");
    return 0.0;
  }
  const double z = (y - spec.offset()) / spec.range();
  if (!(z > 0.0 && z < 1.0)) {
    if (z == 0.0 || z == 1.0) throw AtomError("density evaluated at an atom");
    return 0.0;
  }
  const auto& atoms = spec.atoms();
  const auto& masses = spec.masses();
  for (double a : atoms) {
    if (std::abs(z - a) < quad.singularity_clip) throw AtomError("density evaluated at an atom");
  }
  const double total_mass = static_cast<double>(spec.sample().size()) * spec.alpha();

  if (spec.branch() == DensityBranch::ClosedFormAlphaEqualsOneOverN) {
    double below = 0.0;
    double log_prod = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (atoms[k] < z) below += masses[k];
      log_prod -= masses[k] * std::log(std::abs(atoms[k] - z));
    }
    const double f = boost::math::sin_pi(below) * std::exp(log_prod) / std::numbers::pi;
    return std::max(0.0, f) / spec.range();
  }
  const double f = (total_mass - 1.0) / std::numbers::pi *
                   signed_atom_integral(spec, z, total_mass - 2.0, quad);
  return std::max(0.0, f) / spec.range();
}

double total_mass(const DensitySpec& spec, const QuadratureConfig& quad) {
  require_supported(spec);
  if (spec.range() == 0.0) return 1.0;
  const double power = static_cast<double>(spec.sample().size()) * spec.alpha() - 1.0;
  return signed_atom_integral(spec, 1.0, power, quad) / std::numbers::pi;
}

double cdf_y(const DensitySpec& spec, double y, const QuadratureConfig& quad) {
  require_supported(spec);
  if (spec.range() == 0.0) return y >= spec.offset() ? 1.0 : 0.0;
  const double z = (y - spec.offset()) / spec.range();
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  const double power = static_cast<double>(spec.sample().size()) * spec.alpha() - 1.0;
  const double F = signed_atom_integral(spec, z, power, quad) / std::numbers::pi;
  return std::clamp(F, 0.0, 1.0);
}

std::vector<double> simulate_dirichlet_means(const Sample& sample, double alpha,
                                             std::size_t count, std::uint64_t seed) {
  check_alpha(alpha);
  std::vector<double> out(count);
  const std::size_t batches = (count + kDrawsPerStream - 1) / kDrawsPerStream;
  const auto values = sample.values();
  const double lo = sample.stats().min;
  const double hi = sample.stats().max;
  parallel_for(batches, [&](std::size_t b) {
    RngStream stream = derive_substream(seed, b);
    const std::size_t end = std::min(count, (b + 1) * kDrawsPerStream);
    for (std::size_t i = b * kDrawsPerStream; i < end; ++i) {
      out[i] = std::clamp(draw_dirichlet_mean(values, alpha, stream), lo, hi);
    }
  });
  return out;
}

namespace {

MedianResult monte_carlo_median(const Sample& sample, double alpha, const MedianOptions& options) {
  if (options.mc_draws == 0) throw ConfigError("Monte Carlo median needs at least one draw");
  std::vector<double> draws = simulate_dirichlet_means(sample, alpha, options.mc_draws, options.seed);
  MedianResult result;
  result.method = MedianMethod::MonteCarlo;
  const std::size_t n = draws.size();
  // The sample median's rank has standard deviation sqrt(N)/2, so half the
  // spread between ranks N/2 -+ sqrt(N)/2 estimates its standard error.
  const double half_width = 0.5 * std::sqrt(static_cast<double>(n));
  const auto lo_rank = static_cast<std::size_t>(
      std::max(0.0, std::floor(0.5 * static_cast<double>(n) - half_width)));
  const auto hi_rank = std::min(
      n - 1, static_cast<std::size_t>(std::ceil(0.5 * static_cast<double>(n) + half_width)));
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(lo_rank), draws.end());
  const double lo = draws[lo_rank];
  std::nth_element(draws.begin() + static_cast<std::ptrdiff_t>(lo_rank),
                   draws.begin() + static_cast<std::ptrdiff_t>(hi_rank), draws.end());
  const double hi = draws[hi_rank];
  result.value = median_in_place(draws);
  result.standard_error =
      hi_rank > lo_rank ? (hi - lo) * half_width / static_cast<double>(hi_rank - lo_rank) : 0.0;
  return result;
}

std::optional<double> symmetry_centre(const Sample& sample) {
  std::vector<double> sorted(sample.values().begin(), sample.values().end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double twice_centre = sorted.front() + sorted.back();
  const double tol = 1e-13 * (std::abs(sorted.front()) + std::abs(sorted.back()));
  for (std::size_t i = 0; i < n / 2 + 1 && i < n; ++i) {
    if (std::abs(sorted[i] + sorted[n - 1 - i] - twice_centre) > tol) return std::nullopt;
  }
  return 0.5 * twice_centre;
}

}  // namespace

MedianResult conditional_median(const Sample& sample, double alpha, const MedianOptions& options) {
  check_alpha(alpha);
  if (sample.is_constant()) return {sample[0], 0.0, MedianMethod::Constant};
  if (options.force_monte_carlo) return monte_carlo_median(sample, alpha, options);
  if (const auto centre = symmetry_centre(sample)) return {*centre, 0.0, MedianMethod::Symmetric};

  const DensitySpec spec(sample, alpha);
  if (spec.branch() == DensityBranch::Unsupported) return monte_carlo_median(sample, alpha, options);
  try {
    if (std::abs(total_mass(spec, options.quad) - 1.0) > kNormalizationTol) {
      return monte_carlo_median(sample, alpha, options);
    }
    const double eps = 1e-9 * spec.range();
    double lo = spec.offset() + eps;
    double hi = spec.offset() + spec.range() - eps;
    const double tol = 1e-10 * spec.range();
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
      const double mid = lo + 0.5 * (hi - lo);
      if (cdf_y(spec, mid, options.quad) < 0.5) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {lo + 0.5 * (hi - lo), 0.0, MedianMethod::Bisection};
  } catch (const QuadratureError&) {
    return monte_carlo_median(sample, alpha, options);
  }
}

}  // namespace bmm
