#include "bmm/distributions.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/skew_normal.hpp>

#include "bmm/error.hpp"
#include "bmm/order_stats.hpp"

namespace bmm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

double skew_delta(double shape) { return shape / std::sqrt(1.0 + shape * shape); }

double expo_is_term(double lambda, double x) { return lambda * x * std::exp(-(lambda - 1.0) * x); }

}  // namespace

void validate(const DistributionSpec& d) {
  std::visit(overloaded{
                 [](const dist::Normal& p) { require(p.sigma > 0.0, "normal sigma must be positive"); },
                 [](const dist::SkewNormal& p) {
                   require(p.omega > 0.0, "skew-normal scale must be positive");
                   require(std::isfinite(p.shape), "skew-normal shape must be finite");
                 },
                 [](const dist::Pareto& p) {
                   require(p.scale > 0.0 && p.shape > 0.0, "Pareto scale and shape must be positive");
                 },
                 [](const dist::Lognormal& p) { require(p.sigma > 0.0, "lognormal sigma must be positive"); },
                 [](const dist::Beta& p) { require(p.a > 0.0 && p.b > 0.0, "beta parameters must be positive"); },
                 [](const dist::ExpoPlusT& p) {
                   require(p.rate > 0.0 && p.dof > 0.0 && p.scale > 0.0,
                           "exponential-plus-t parameters must be positive");
                 },
                 [](const dist::ThreePoint& p) {
                   require(p.sigma > 0.0 && p.p >= 0.0 && p.n_ref >= 1.0,
                           "three-point parameters out of range");
                 },
                 [](const dist::TwoPointMaxBias& p) {
                   require(p.sigma > 0.0 && p.eps >= 0.0 && p.eps < 0.5,
                           "two-point parameters out of range");
                 },
                 [](const dist::ExpoIS& p) { require(p.lambda > 0.0, "lambda must be positive"); },
                 [](const dist::Exponential& p) { require(p.rate > 0.0, "rate must be positive"); },
             },
             d);
}

double true_mean(const DistributionSpec& d) {
  validate(d);
  return std::visit(
      overloaded{
          [](const dist::Normal& p) { return p.mu; },
          [](const dist::SkewNormal& p) {
            return p.xi + p.omega * skew_delta(p.shape) * std::sqrt(2.0 / std::numbers::pi);
          },
          [](const dist::Pareto& p) {
            if (p.shape <= 1.0) throw UndefinedMean("Pareto mean needs shape > 1");
            return p.loc + p.scale * p.shape / (p.shape - 1.0);
          },
          [](const dist::Lognormal& p) { return std::exp(p.mu + 0.5 * p.sigma * p.sigma); },
          [](const dist::Beta& p) { return p.a / (p.a + p.b); },
          [](const dist::ExpoPlusT& p) {
            if (p.dof <= 1.0) throw UndefinedMean("t mean needs more than one degree of freedom");
            return 1.0 / p.rate;
          },
          [](const dist::ThreePoint&) { return 0.0; },
          [](const dist::TwoPointMaxBias& p) { return 2.0 * p.eps * p.sigma; },
          [](const dist::ExpoIS& p) { return 1.0 / p.lambda; },
          [](const dist::Exponential& p) { return p.shift + 1.0 / p.rate; },
      },
      d);
}

double variance(const DistributionSpec& d) {
  validate(d);
  return std::visit(
      overloaded{
          [](const dist::Normal& p) { return p.sigma * p.sigma; },
          [](const dist::SkewNormal& p) {
            const double delta = skew_delta(p.shape);
            return p.omega * p.omega * (1.0 - 2.0 * delta * delta / std::numbers::pi);
          },
          [](const dist::Pareto& p) {
            if (p.shape <= 1.0) throw UndefinedMean("Pareto mean needs shape > 1");
            if (p.shape <= 2.0) return kInf;
            return p.scale * p.scale * p.shape / ((p.shape - 1.0) * (p.shape - 1.0) * (p.shape - 2.0));
          },
          [](const dist::Lognormal& p) {
            const double s2 = p.sigma * p.sigma;
            return std::expm1(s2) * std::exp(2.0 * p.mu + s2);
          },
          [](const dist::Beta& p) {
            const double s = p.a + p.b;
            return p.a * p.b / (s * s * (s + 1.0));
          },
          [](const dist::ExpoPlusT& p) {
            if (p.dof <= 1.0) throw UndefinedMean("t mean needs more than one degree of freedom");
            if (p.dof <= 2.0) return kInf;
            return 1.0 / (p.rate * p.rate) + p.scale * p.scale * p.dof / (p.dof - 2.0);
          },
          [](const dist::ThreePoint& p) {
            return std::pow(p.n_ref, 4.0 - p.p) * p.sigma * p.sigma;
          },
          [](const dist::TwoPointMaxBias& p) {
            return p.sigma * p.sigma * (1.0 - 4.0 * p.eps * p.eps);
          },
          [](const dist::ExpoIS& p) {
            // E[term^2] = 2 lambda^2 / (2 lambda - 1)^3 when lambda > 1/2.
            if (p.lambda <= 0.5) return kInf;
            const double k = 2.0 * p.lambda - 1.0;
            return 2.0 * p.lambda * p.lambda / (k * k * k) - 1.0 / (p.lambda * p.lambda);
          },
          [](const dist::Exponential& p) { return 1.0 / (p.rate * p.rate); },
      },
      d);
}

bool has_finite_variance(const DistributionSpec& d) { return std::isfinite(variance(d)); }

double draw(const DistributionSpec& d, RngStream& s) {
  return std::visit(
      overloaded{
          [&](const dist::Normal& p) { return p.mu + p.sigma * s.normal(); },
          [&](const dist::SkewNormal& p) {
            const double delta = skew_delta(p.shape);
            const double z1 = std::abs(s.normal());
            const double z2 = s.normal();
            return p.xi + p.omega * (delta * z1 + std::sqrt(1.0 - delta * delta) * z2);
          },
          [&](const dist::Pareto& p) {
            return p.loc + p.scale * std::exp(-std::log(s.uniform()) / p.shape);
          },
          [&](const dist::Lognormal& p) { return std::exp(p.mu + p.sigma * s.normal()); },
          [&](const dist::Beta& p) {
            const double x = s.gamma(p.a);
            const double y = s.gamma(p.b);
            return x / (x + y);
          },
          [&](const dist::ExpoPlusT& p) {
            const double e = s.exponential() / p.rate;
            const double half = 0.5 * p.dof;
            const double t = s.normal() / std::sqrt(s.gamma(half) / half);
            return e + p.scale * t;
          },
          [&](const dist::ThreePoint& p) {
            const double q = 0.5 * std::pow(p.n_ref, -p.p);
            const double mag = p.n_ref * p.n_ref * p.sigma;
            const double u = s.uniform();
            if (u < q) return mag;
            if (u < 2.0 * q) return -mag;
            return 0.0;
          },
          [&](const dist::TwoPointMaxBias& p) {
            return s.uniform() < 0.5 + p.eps ? p.sigma : -p.sigma;
          },
          [&](const dist::ExpoIS& p) { return expo_is_term(p.lambda, s.exponential()); },
          [&](const dist::Exponential& p) { return p.shift + s.exponential() / p.rate; },
      },
      d);
}

Sample sample_distribution(const DistributionSpec& d, std::size_t n, RngStream& stream) {
  validate(d);
  if (n == 0) throw ConfigError("sample size must be positive");
  std::vector<double> values(n);
  for (double& v : values) v = draw(d, stream);
  return Sample(std::move(values));
}

double population_median(const DistributionSpec& d) {
  validate(d);
  const auto simulated = [&] {
    RngStream stream(0x6d6564ULL, 0);
    std::vector<double> values(1'000'000);
    for (double& v : values) v = draw(d, stream);
    return median_in_place(values);
  };
  return std::visit(
      overloaded{
          [](const dist::Normal& p) { return p.mu; },
          [](const dist::SkewNormal& p) {
            return boost::math::median(boost::math::skew_normal(p.xi, p.omega, p.shape));
          },
          [](const dist::Pareto& p) { return p.loc + p.scale * std::pow(2.0, 1.0 / p.shape); },
          [](const dist::Lognormal& p) { return std::exp(p.mu); },
          [](const dist::Beta& p) { return boost::math::median(boost::math::beta_distribution<>(p.a, p.b)); },
          [&](const dist::ExpoPlusT&) { return simulated(); },
          // Symmetric about 0; at p = 0 the midpoint convention also gives 0.
          [](const dist::ThreePoint&) { return 0.0; },
          [](const dist::TwoPointMaxBias& p) { return p.eps > 0.0 ? p.sigma : 0.0; },
          [&](const dist::ExpoIS& p) {
            // The term is increasing in X when lambda <= 1.
            if (p.lambda <= 1.0) return expo_is_term(p.lambda, std::numbers::ln2);
            return simulated();
          },
          [](const dist::Exponential& p) { return p.shift + std::numbers::ln2 / p.rate; },
      },
      d);
}

namespace {

std::vector<double> parse_params(std::string_view body) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view token = body.substr(pos, comma - pos);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    if (token.empty()) throw ConfigError("empty distribution parameter");
    double value = 0.0;
    // from_chars does not accept a leading '+'.
    if (token.front() == '+') token.remove_prefix(1);
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw ConfigError("bad distribution parameter: " + std::string(token));
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

DistributionSpec parse_distribution(std::string_view text) {
  const std::size_t open = text.find('(');
  const std::size_t close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      close + 1 != text.size()) {
    throw ConfigError("distribution must look like kind(p1,p2,...)");
  }
  std::string kind(text.substr(0, open));
  for (char& c : kind) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::vector<double> p = parse_params(text.substr(open + 1, close - open - 1));
  const auto need = [&](std::size_t count) {
    if (p.size() != count) {
      throw ConfigError(kind + " takes " + std::to_string(count) + " parameters");
    }
  };
  DistributionSpec d;
  if (kind == "normal") {
    need(2);
    d = dist::Normal{p[0], p[1]};
  } else if (kind == "skewnormal") {
    need(3);
    d = dist::SkewNormal{p[0], p[1], p[2]};
  } else if (kind == "pareto") {
    need(3);
    d = dist::Pareto{p[0], p[1], p[2]};
  } else if (kind == "lognormal") {
    need(2);
    d = dist::Lognormal{p[0], p[1]};
  } else if (kind == "beta") {
    need(2);
    d = dist::Beta{p[0], p[1]};
  } else if (kind == "expot") {
    need(3);
    d = dist::ExpoPlusT{p[0], p[1], p[2]};
  } else if (kind == "threepoint") {
    need(3);
    d = dist::ThreePoint{p[0], p[1], p[2]};
  } else if (kind == "maxbias") {
    need(2);
    d = dist::TwoPointMaxBias{p[0], p[1]};
  } else if (kind == "expois") {
    need(1);
    d = dist::ExpoIS{p[0]};
  } else if (kind == "expo") {
    if (p.size() == 1) {
      d = dist::Exponential{p[0], 0.0};
    } else {
      need(2);
      d = dist::Exponential{p[0], p[1]};
    }
  } else {
    throw ConfigError("unknown distribution kind: " + kind);
  }
  validate(d);
  return d;
}

std::string to_string(const DistributionSpec& d) {
  std::ostringstream os;
  os.precision(17);
  const auto emit = [&](const char* kind, std::initializer_list<double> params) {
    os << kind << '(';
    bool first = true;
    for (double v : params) {
      if (!first) os << ',';
      os << v;
      first = false;
    }
    os << ')';
  };
  std::visit(overloaded{
                 [&](const dist::Normal& p) { emit("normal", {p.mu, p.sigma}); },
                 [&](const dist::SkewNormal& p) { emit("skewnormal", {p.xi, p.omega, p.shape}); },
                 [&](const dist::Pareto& p) { emit("pareto", {p.loc, p.scale, p.shape}); },
                 [&](const dist::Lognormal& p) { emit("lognormal", {p.mu, p.sigma}); },
                 [&](const dist::Beta& p) { emit("beta", {p.a, p.b}); },
                 [&](const dist::ExpoPlusT& p) { emit("expot", {p.rate, p.dof, p.scale}); },
                 [&](const dist::ThreePoint& p) { emit("threepoint", {p.sigma, p.p, p.n_ref}); },
                 [&](const dist::TwoPointMaxBias& p) { emit("maxbias", {p.sigma, p.eps}); },
                 [&](const dist::ExpoIS& p) { emit("expois", {p.lambda}); },
                 [&](const dist::Exponential& p) { emit("expo", {p.rate, p.shift}); },
             },
             d);
  return os.str();
}

}  // namespace bmm
