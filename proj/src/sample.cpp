#include "bmm/sample.hpp"

#include <algorithm>
#include <cmath>

#include "bmm/error.hpp"

namespace bmm {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptyInput("sample must contain at least one value");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("sample values must be finite");
  }
  stats_ = summary_stats(values_);
}

SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("summary of an empty sample");
  SummaryStats s;
  const auto n = static_cast<double>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  if (s.min == s.max) {
    s.mean = s.min;
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / n;
  // One correction pass brings the mean to full precision.
  double resid = 0.0;
  for (double v : values) resid += v - mean;
  mean += resid / n;
  s.mean = std::clamp(mean, s.min, s.max);

  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  s.variance_biased = m2;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return s;
}

}  // namespace bmm
