#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bmm/rng.hpp"
#include "bmm/sample.hpp"

namespace bmm {

/// One point on the probability simplex.
struct DirichletWeights {
  std::vector<double> p;
};

/// Dir_n(alpha, ..., alpha) by normalizing independent Gamma(alpha, 1)
/// draws. Below alpha = 1 the draws are made in log space and shifted by
/// their maximum before exponentiating, so tiny alphas do not underflow.
DirichletWeights sample_symmetric_dirichlet(std::size_t n, double alpha, RngStream& stream);

/// Dir_n(1, ..., 1) as the spacings of n-1 sorted uniforms.
DirichletWeights sample_dirichlet_uniform_fast(std::size_t n, RngStream& stream);

/// Allocation-free versions writing into `out` (size n).
void fill_symmetric_dirichlet(std::span<double> out, double alpha, RngStream& stream);
void fill_dirichlet_uniform_fast(std::span<double> out, RngStream& stream);

/// Inner product of weights and sample. Throws ShapeError on length mismatch.
double weighted_mean(const DirichletWeights& weights, const Sample& sample);
double weighted_mean(std::span<const double> weights, std::span<const double> values);

/// One draw of Y = sum p_i x_i with p ~ Dir_n(alpha). Used on hot paths: the
/// weight vector is never materialized.
double draw_dirichlet_mean(std::span<const double> values, double alpha, RngStream& stream);

}  // namespace bmm
