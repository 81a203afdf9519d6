#include "bmm/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bmm/error.hpp"

namespace bmm {
namespace {

constexpr double kTMax = 12.0;
constexpr int kMinLevels = 4;
constexpr double kNegligible = 1e-20;

// log(1 + e^{2u}) for u >= 0 without overflow.
double log1p_exp2(double u) { return 2.0 * u + std::log1p(std::exp(-2.0 * u)); }

// Sum of term(...) over the tanh-sinh nodes t = offset + i * stride, i >= 0,
// on both sides of the centre, walking outward until the terms vanish.
// term receives x, log distance to a, log distance to b and log weight.
template <class Term>
double sweep(double a, double b, double offset, double stride, Term&& term) {
  const double half = 0.5 * (b - a);
  const double log_2half = std::log(2.0 * half);
  const double log_weight_scale = std::log(half * std::numbers::pi / 2.0);
  double total = 0.0;
  for (double t = offset; t <= kTMax; t += stride) {
    const double u = std::numbers::pi / 2.0 * std::sinh(t);
    // Distance from the node to the near endpoint, 2h / (1 + e^{2u}).
    const double log_near = log_2half - log1p_exp2(u);
    const double near = std::exp(log_near);
    const double far = 2.0 * half - near;
    const double log_far = std::log(far);
    const double log_w = log_weight_scale + std::log(std::cosh(t)) -
                         2.0 * (log1p_exp2(u) - u - std::log(2.0));
    // t >= 0 sits near b, its mirror near a.
    double here = term(b - near, log_far, log_near, log_w);
    if (t > 0.0) here += term(a + near, log_near, log_far, log_w);
    total += here;
    if (t > 1.0 && std::abs(here) <= kNegligible * std::abs(total)) break;
    if (t > 1.0 && total == 0.0 && here == 0.0) break;
  }
  return total;
}

template <class Term>
double tanh_sinh(double a, double b, const QuadratureConfig& config, Term&& term) {
  if (!(config.abs_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  if (!(b > a)) return 0.0;
  double stride = 1.0;
  double sum = sweep(a, b, 0.0, stride, term);
  double estimate = sum * stride;
  for (int level = 1; level <= config.max_refinements; ++level) {
    sum += sweep(a, b, stride / 2.0, stride, term);
    stride /= 2.0;
    const double next = sum * stride;
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (!std::isfinite(estimate)) break;
    if (level >= kMinLevels && diff <= config.abs_tol * std::max(1.0, std::abs(estimate))) {
      return estimate;
    }
  }
  throw QuadratureError("quadrature did not converge on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
}

}  // namespace

double integrate_power_product(double a, double b, std::span<const PowerFactor> factors,
                               const QuadratureConfig& config) {
  for (const PowerFactor& f : factors) {
    if (f.location > a && f.location < b) {
      throw DomainError("power factor located inside the integration interval");
    }
  }
  return tanh_sinh(a, b, config, [&](double x, double log_da, double log_db, double log_w) {
    double log_f = log_w;
    for (const PowerFactor& f : factors) {
      if (f.exponent == 0.0) continue;
      double log_dist;
      if (f.location == a) {
        log_dist = log_da;
      } else if (f.location == b) {
        log_dist = log_db;
      } else {
        log_dist = std::log(std::abs(x - f.location));
      }
      log_f += f.exponent * log_dist;
    }
    return std::exp(log_f);
  });
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config) {
  return tanh_sinh(a, b, config, [&](double x, double, double, double log_w) {
    if (x <= a || x >= b) return 0.0;
    return std::exp(log_w) * f(x);
  });
}

}  // namespace bmm
