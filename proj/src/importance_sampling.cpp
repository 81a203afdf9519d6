#include "bmm/importance_sampling.hpp"

#include <algorithm>
#include <cmath>

#include "bmm/error.hpp"
#include "bmm/parallel.hpp"

namespace bmm {
namespace {

constexpr std::uint64_t kFibDrawTag = 21;
constexpr unsigned kMaxExactFib = 92;
constexpr unsigned kMaxEnumeration = 14;

std::uint64_t count_placements(unsigned object, unsigned m, std::vector<char>& taken) {
  if (object == m) return 1;
  std::uint64_t total = 0;
  const unsigned first = object == 0 ? 0 : object - 1;
  const unsigned last = std::min(object + 1, m - 1);
  for (unsigned pos = first; pos <= last; ++pos) {
    if (taken[pos]) continue;
    taken[pos] = 1;
    total += count_placements(object + 1, m, taken);
    taken[pos] = 0;
  }
  return total;
}

}  // namespace

std::uint64_t fib_oracle(unsigned m) {
  if (m == 0) throw ConfigError("m must be positive");
  if (m > kMaxExactFib) throw OverflowError("count exceeds 64 bits for m > 92");
  std::uint64_t prev = 1;  // P_0
  std::uint64_t cur = 1;   // P_1
  for (unsigned k = 2; k <= m; ++k) {
    const std::uint64_t next = cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double fib_oracle_approx(unsigned m) {
  if (m == 0) throw ConfigError("m must be positive");
  double prev = 1.0;
  double cur = 1.0;
  for (unsigned k = 2; k <= m; ++k) {
    const double next = cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::uint64_t enumerate_fib_permutations(unsigned m) {
  if (m == 0) throw ConfigError("m must be positive");
  if (m > kMaxEnumeration) throw BudgetError("enumeration limited to m <= 14");
  std::vector<char> taken(m, 0);
  return count_placements(0, m, taken);
}

FibDraw sample_fib_permutation(unsigned m, RngStream& stream) {
  if (m == 0) throw ConfigError("m must be positive");
  FibDraw draw;
  draw.permutation.assign(m, -1);
  auto& p = draw.permutation;
  unsigned i = 0;
  while (i < m) {
    // Positions below i are always filled by now, so the candidates are i
    // and i+1, the latter only when it exists.
    unsigned available[2];
    unsigned count = 0;
    if (p[i] == -1) available[count++] = i;
    if (i + 1 < m && p[i + 1] == -1) available[count++] = i + 1;
    if (count == 2) ++draw.doublings;
    const unsigned chosen = count == 2 ? available[stream.uniform_index(2)] : available[0];
    p[chosen] = static_cast<int>(i);
    if (chosen != i) {
      p[i] = static_cast<int>(chosen);
      ++i;
    }
    ++i;
  }
  draw.weight = std::ldexp(1.0, static_cast<int>(draw.doublings));
  return draw;
}

std::vector<double> fib_weights(unsigned m, std::size_t n_draws, std::uint64_t seed) {
  if (n_draws == 0) throw ConfigError("need at least one draw");
  std::vector<double> weights(n_draws);
  const std::uint64_t draw_seed = mix_seed(seed, kFibDrawTag);
  parallel_for(n_draws, [&](std::size_t k) {
    RngStream stream = derive_substream(draw_seed, k);
    weights[k] = sample_fib_permutation(m, stream).weight;
  });
  return weights;
}

EstimateReport is_estimate_fib(unsigned m, std::size_t n_draws, Method aggregator,
                               const EstimatorConfig& config, std::uint64_t seed) {
  switch (aggregator) {
    case Method::Mean:
    case Method::BMM:
    case Method::ABMM:
    case Method::MM:
      break;
    default:
      throw ConfigError("aggregator must be mean, bmm, abmm or mm");
  }
  const Sample weights(fib_weights(m, n_draws, seed));
  EstimateReport report;
  report.method = aggregator;
  report.config_echo = config;
  report.estimate = run_estimator(aggregator, weights, config, std::min<std::size_t>(3, n_draws));
  return report;
}

Sample expo_is_terms(double lambda, std::size_t n, RngStream& stream) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (n == 0) throw ConfigError("n must be positive");
  std::vector<double> terms(n);
  for (double& t : terms) {
    const double x = stream.exponential();
    t = lambda * x * std::exp(-(lambda - 1.0) * x);
  }
  return Sample(std::move(terms));
}

}  // namespace bmm
