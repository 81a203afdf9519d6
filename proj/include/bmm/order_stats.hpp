#pragma once

#include <span>
#include <vector>

namespace bmm {

/// Sample median. Odd length: the middle order statistic. Even length: the
/// average of the two middle order statistics. The input is not modified.
/// Throws EmptyInput on an empty span.
double sample_median(std::span<const double> values);

/// Same as sample_median but reorders `scratch` in place (no allocation).
double median_in_place(std::span<double> scratch);

/// Empirical quantile with linear interpolation between order statistics
/// (h = (N-1)p, the "type 7" convention). p must be in [0, 1].
double quantile_linear(std::span<const double> values, double p);

/// quantile_linear on data that is already sorted ascending.
double quantile_linear_sorted(std::span<const double> sorted, double p);

}  // namespace bmm
