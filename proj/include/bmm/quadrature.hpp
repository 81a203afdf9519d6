#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bmm {

struct QuadratureConfig {
  double abs_tol = 1e-8;
  /// Number of step-halvings of the double-exponential rule before giving up.
  int max_refinements = 12;
  /// Points closer than this to an atom are rejected by the density.
  double singularity_clip = 1e-10;
};

/// |x - location|^exponent, one factor of a product integrand.
struct PowerFactor {
  double location;
  double exponent;
};

/// Integral over [a, b] of prod_k |x - location_k|^exponent_k.
///
/// Uses tanh-sinh quadrature evaluated in log space. Factors sitting exactly
/// on an endpoint get their distance from the transform itself rather than
/// from x - a, so endpoint singularities with exponent > -1 are integrated
/// without clipping. No factor may lie strictly inside (a, b).
/// Throws QuadratureError when successive refinements do not agree to
/// abs_tol (relative to the size of the result when that is larger than 1).
double integrate_power_product(double a, double b, std::span<const PowerFactor> factors,
                               const QuadratureConfig& config = {});

/// Integral of a function that is smooth inside (a, b); endpoints are never
/// evaluated.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config = {});

}  // namespace bmm
