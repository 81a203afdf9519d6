#pragma once

#include <cstdint>
#include <vector>

#include "bmm/estimators.hpp"
#include "bmm/rng.hpp"
#include "bmm/sample.hpp"

namespace bmm {

/// One sequentially built Fibonacci permutation and its importance weight.
struct FibDraw {
  std::vector<int> permutation;  // permutation[position] = object
  /// Product of the branch counts. Every count is 1 or 2, so the weight is a
  /// power of two and the double holds it exactly for any m we can sample.
  double weight = 1.0;
  unsigned doublings = 0;  // weight == 2^doublings
};

/// Number of permutations of m objects where each object moves at most one
/// place: P_1 = 1, P_2 = 2, P_m = P_{m-1} + P_{m-2}. Throws OverflowError for
/// m > 92 and ConfigError for m = 0.
std::uint64_t fib_oracle(unsigned m);

/// Same recursion in floating point, for sizes beyond 64-bit range.
double fib_oracle_approx(unsigned m);

/// Exact count by backtracking over placements. Throws BudgetError for m > 14.
std::uint64_t enumerate_fib_permutations(unsigned m);

/// Objects are placed in order; object i goes uniformly to one of the free
/// positions among {i, i+1} (only i for the last object). Taking i+1 forces
/// object i+1 into position i, and that object is skipped.
FibDraw sample_fib_permutation(unsigned m, RngStream& stream);

/// Aggregates n_draws importance weights with Mean, BMM, ABMM or MM (g = 3).
/// Draw i uses its own substream of `seed`; BMM weights use config.seed.
EstimateReport is_estimate_fib(unsigned m, std::size_t n_draws, Method aggregator,
                               const EstimatorConfig& config, std::uint64_t seed);

/// The raw weights behind is_estimate_fib.
std::vector<double> fib_weights(unsigned m, std::size_t n_draws, std::uint64_t seed);

/// n terms lambda X exp(-(lambda - 1) X), X ~ Expo(1); each has mean 1/lambda.
Sample expo_is_terms(double lambda, std::size_t n, RngStream& stream);

}  // namespace bmm
