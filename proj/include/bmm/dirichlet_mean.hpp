#pragma once

#include <cstdint>
#include <vector>

#include "bmm/quadrature.hpp"
#include "bmm/sample.hpp"

namespace bmm {

// Distribution of Y = sum p_i x_i, p ~ Dir_n(alpha), holding the sample x fixed.

double conditional_moment(const Sample& sample, double alpha, unsigned m);

/// s^2 / (n alpha + 1).
double conditional_variance(const Sample& sample, double alpha);

/// Variance of Y when the data are iid with variance sigma2:
/// (sigma2 / n) * n (alpha + 1) / (n alpha + 1).
double unconditional_variance(double sigma2, std::size_t n, double alpha);

enum class DensityBranch { ClosedFormAlphaEqualsOneOverN, RealIntegralBranch, Unsupported };

/// The sample with tied values merged into weighted atoms, rescaled to [0, 1].
class DensitySpec {
public:
  DensitySpec(Sample sample, double alpha);

  const Sample& sample() const { return sample_; }
  double alpha() const { return alpha_; }
  DensityBranch branch() const { return branch_; }

  // Distinct atoms mapped to [0, 1] and their Dirichlet mass alpha * multiplicity.
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& masses() const { return masses_; }
  double offset() const { return offset_; }
  double range() const { return range_; }

private:
  Sample sample_;
  double alpha_;
  DensityBranch branch_;
  std::vector<double> atoms_;
  std::vector<double> masses_;
  double offset_ = 0.0;
  double range_ = 0.0;
};

/// Density of Y at y. Zero outside the support. Throws UnsupportedAlpha when
/// the branch is unsupported, AtomError within singularity_clip (relative to
/// the sample range) of a sample value, QuadratureError if integration fails.
double density_y(const DensitySpec& spec, double y, const QuadratureConfig& quad = {});

/// P[Y <= y], clamped to [0, 1].
double cdf_y(const DensitySpec& spec, double y, const QuadratureConfig& quad = {});

/// Unclamped CDF at the top of the support. Equals 1 up to quadrature error
/// on supported branches.
double total_mass(const DensitySpec& spec, const QuadratureConfig& quad = {});

/// Draws `count` values of Y. Draw i comes from a fixed substream of `seed`,
/// independent of the number of worker threads.
std::vector<double> simulate_dirichlet_means(const Sample& sample, double alpha,
                                             std::size_t count, std::uint64_t seed);

enum class MedianMethod { Constant, Symmetric, Bisection, MonteCarlo };

struct MedianOptions {
  std::size_t mc_draws = 1'000'000;
  std::uint64_t seed = 0x6d656469616eULL;
  QuadratureConfig quad;
  bool force_monte_carlo = false;
};

struct MedianResult {
  double value = 0.0;
  double standard_error = 0.0;  // 0 unless Monte Carlo
  MedianMethod method = MedianMethod::Constant;
};

/// Median of Y given the sample. A sample that mirrors about its midpoint
/// gives a symmetric Y, whose median is that midpoint. Otherwise solves
/// cdf_y = 1/2 by bisection on supported branches and falls back to the
/// median of simulated draws when the branch is unsupported or the density
/// does not normalize to 1 within 1e-6.
MedianResult conditional_median(const Sample& sample, double alpha,
                                const MedianOptions& options = {});

}  // namespace bmm
