#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "bmm/rng.hpp"
#include "bmm/sample.hpp"

namespace bmm {

namespace dist {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};

struct SkewNormal {
  double xi = 0.0;
  double omega = 1.0;
  double shape = 0.0;
};

/// loc + scale * U^{-1/shape}; support [loc + scale, inf).
struct Pareto {
  double loc = 0.0;
  double scale = 1.0;
  double shape = 3.0;
};

struct Lognormal {
  double mu = 0.0;
  double sigma = 1.0;
};

struct Beta {
  double a = 1.0;
  double b = 1.0;
};

/// Exponential with the given rate plus an independent centred Student t.
struct ExpoPlusT {
  double rate = 1.0;
  double dof = 3.0;
  double scale = 1.0;
};

/// +-n_ref^2 sigma, each with probability 1 / (2 n_ref^p), else 0.
struct ThreePoint {
  double sigma = 1.0;
  double p = 1.0;
  double n_ref = 10.0;
};

/// +sigma with probability 1/2 + eps, -sigma otherwise.
struct TwoPointMaxBias {
  double sigma = 1.0;
  double eps = 0.0;
};

/// lambda X exp(-(lambda - 1) X) with X ~ Expo(1): an importance-sampling
/// estimate of 1/lambda.
struct ExpoIS {
  double lambda = 1.0;
};

/// shift + Expo(rate).
struct Exponential {
  double rate = 1.0;
  double shift = 0.0;
};

}  // namespace dist

using DistributionSpec =
    std::variant<dist::Normal, dist::SkewNormal, dist::Pareto, dist::Lognormal, dist::Beta,
                 dist::ExpoPlusT, dist::ThreePoint, dist::TwoPointMaxBias, dist::ExpoIS,
                 dist::Exponential>;

/// Throws ConfigError on invalid parameters (nonpositive scales and so on).
void validate(const DistributionSpec& dist);

/// Throws UndefinedMean for Pareto shape <= 1 and t dof <= 1.
double true_mean(const DistributionSpec& dist);

/// Infinite for heavy-tailed parameterizations; UndefinedMean propagates.
double variance(const DistributionSpec& dist);
bool has_finite_variance(const DistributionSpec& dist);

/// Exact where a closed form or a boost quantile exists, otherwise the
/// median of 10^6 simulated draws on a fixed stream.
double population_median(const DistributionSpec& dist);

double draw(const DistributionSpec& dist, RngStream& stream);
Sample sample_distribution(const DistributionSpec& dist, std::size_t n, RngStream& stream);

/// Parses `kind(p1,p2,...)`, e.g. `pareto(0,1000,2.5)` or `expo(0.3333,5)`.
/// Kinds: normal, skewnormal, pareto, lognormal, beta, expot, threepoint,
/// maxbias, expois, expo. Throws ConfigError on malformed input.
DistributionSpec parse_distribution(std::string_view text);
std::string to_string(const DistributionSpec& dist);

}  // namespace bmm
