#include "bmm/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmm/error.hpp"

namespace bmm {
namespace {

constexpr int kMaxRedraws = 100;

// Force the simplex constraint exactly by absorbing rounding drift into the
// last coordinate.
void fix_last_coordinate(std::span<double> p) {
  if (p.size() < 2) return;
  double others = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) others += p[i];
  const double drift = others + p.back() - 1.0;
  if (std::abs(drift) < 1e-12) p.back() = std::max(0.0, 1.0 - others);
}

bool normalize(std::span<double> p) {
  double total = 0.0;
  for (double v : p) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) return false;
  const double inv = 1.0 / total;
  for (double& v : p) v *= inv;
  fix_last_coordinate(p);
  return true;
}

}  // namespace

void fill_symmetric_dirichlet(std::span<double> out, double alpha, RngStream& stream) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (out.empty()) throw ConfigError("dimension must be positive");
  if (out.size() == 1) {
    out[0] = 1.0;
    return;
  }
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    if (alpha < 1.0) {
      double top = -std::numeric_limits<double>::infinity();
      for (double& v : out) {
        v = stream.log_gamma_variate(alpha);
        top = std::max(top, v);
      }
      if (!std::isfinite(top)) continue;
      for (double& v : out) v = std::exp(v - top);
    } else {
      for (double& v : out) v = stream.gamma(alpha);
    }
    if (normalize(out)) return;
  }
  throw NumericalError("Dirichlet draw degenerate after repeated attempts");
}

void fill_dirichlet_uniform_fast(std::span<double> out, RngStream& stream) {
  const std::size_t n = out.size();
  if (n == 0) throw ConfigError("dimension must be positive");
  // The n-1 cut points go into out[0..n-2], sorted, then are differenced in
  // place from the top down.
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = stream.uniform();
  std::sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n - 1));
  out[n - 1] = 1.0 - (n >= 2 ? out[n - 2] : 0.0);
  for (std::size_t i = n - 1; i-- > 1;) out[i] = out[i] - out[i - 1];
  fix_last_coordinate(out);
}

DirichletWeights sample_symmetric_dirichlet(std::size_t n, double alpha, RngStream& stream) {
  DirichletWeights w{std::vector<double>(n)};
  fill_symmetric_dirichlet(w.p, alpha, stream);
  return w;
}

DirichletWeights sample_dirichlet_uniform_fast(std::size_t n, RngStream& stream) {
  DirichletWeights w{std::vector<double>(n)};
  fill_dirichlet_uniform_fast(w.p, stream);
  return w;
}

double weighted_mean(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) throw ShapeError("weights and sample differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * values[i];
  return acc;
}

double weighted_mean(const DirichletWeights& weights, const Sample& sample) {
  const double y = weighted_mean(weights.p, sample.values());
  // Convexity holds exactly in real arithmetic; keep it under rounding too.
  return std::clamp(y, sample.stats().min, sample.stats().max);
}

double draw_dirichlet_mean(std::span<const double> values, double alpha, RngStream& stream) {
  const std::size_t n = values.size();
  if (n == 1) return values[0];
  if (alpha == 1.0) {
    // Normalized unit exponentials: the same law as the sorted-uniform
    // spacings, without the sort.
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = stream.exponential();
      total += g;
      acc += g * values[i];
    }
    return acc / total;
  }
  if (alpha > 1.0) {
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = stream.gamma(alpha);
      total += g;
      acc += g * values[i];
    }
    return acc / total;
  }
  thread_local std::vector<double> scratch;
  scratch.resize(n);
  fill_symmetric_dirichlet(scratch, alpha, stream);
  return weighted_mean(scratch, values);
}

}  // namespace bmm
