#pragma once

#include <span>
#include <vector>

namespace bmm {

/// Location, spread and shape of a sample, all with the 1/n convention.
struct SummaryStats {
  double mean = 0.0;
  double variance_biased = 0.0;
  double skewness = 0.0;  // 0 when variance_biased is 0
  double min = 0.0;
  double max = 0.0;
};

/// A non-empty vector of finite estimates of the same quantity.
class Sample {
public:
  /// Throws EmptyInput when empty and DomainError on NaN or infinity.
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  const SummaryStats& stats() const { return stats_; }
  bool is_constant() const { return stats_.min == stats_.max; }

private:
  std::vector<double> values_;
  SummaryStats stats_;
};

SummaryStats summary_stats(std::span<const double> values);
inline SummaryStats summary_stats(const Sample& sample) { return sample.stats(); }

}  // namespace bmm
