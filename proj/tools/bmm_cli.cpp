#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmm/bootstrap_ci.hpp"
#include "bmm/bounds.hpp"
#include "bmm/dirichlet_mean.hpp"
#include "bmm/distributions.hpp"
#include "bmm/error.hpp"
#include "bmm/estimators.hpp"
#include "bmm/importance_sampling.hpp"
#include "bmm/parallel.hpp"
#include "bmm/simulation.hpp"

namespace {

using nlohmann::json;

constexpr int kUsageError = 2;
constexpr int kNumericalError = 3;

std::vector<double> parse_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw bmm::ConfigError("line " + std::to_string(line_no) + " is not a number: " + token);
    }
    values.push_back(v);
  }
  return values;
}

bmm::Sample read_sample(const std::string& path) {
  if (path == "-") return bmm::Sample(parse_values(std::cin));
  std::ifstream file(path);
  if (!file) throw bmm::ConfigError("cannot open " + path);
  return bmm::Sample(parse_values(file));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw bmm::ConfigError("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw bmm::ConfigError("cannot write " + path);
  file << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json bound_json(const bmm::BoundReport& r) {
  return {{"bound_value", r.bound_value},   {"empirical_value", r.empirical_value},
          {"n_trials", r.n_trials},         {"satisfied", r.satisfied},
          {"standard_error", r.standard_error}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian median of means and related robust mean estimators"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate a location from values, one per line");
  std::string method = "bmm";
  double alpha = 1.0;
  std::optional<std::size_t> J;
  std::size_t g = 3;
  std::uint64_t seed = 0;
  std::string input = "-";
  estimate->add_option("--method", method, "mean|median|bmm|abmm|mm|hl")->capture_default_str();
  estimate->add_option("--alpha", alpha, "Dirichlet concentration")->capture_default_str();
  estimate->add_option("--J", J, "Number of Dirichlet draws (default n)");
  estimate->add_option("--g", g, "Median-of-means blocks")->capture_default_str();
  estimate->add_option("--seed", seed)->capture_default_str();
  estimate->add_option("--input", input, "File, or - for standard input")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimator comparison");
  std::string dist_text;
  std::size_t n = 100;
  std::size_t reps = 1000;
  std::string estimators = "mean,bmm,abmm,mm,median";
  std::string out;
  std::string experiment = "compare";
  double delta = 0.05;
  simulate->add_option("--dist", dist_text, "kind(p1,p2,...), e.g. pareto(0,1000,2.5)")->required();
  simulate->add_option("--n", n)->capture_default_str();
  simulate->add_option("--reps", reps)->capture_default_str();
  simulate->add_option("--estimators", estimators)->capture_default_str();
  simulate->add_option("--alpha", alpha)->capture_default_str();
  simulate->add_option("--J", J);
  simulate->add_option("--g", g)->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--out", out, "CSV output file");
  simulate->add_option("--experiment", experiment, "compare|bounds")->capture_default_str();
  simulate->add_option("--delta", delta, "Failure probability for the median-of-means bound")
      ->capture_default_str();

  // ci
  auto* ci = app.add_subcommand("ci", "Percentile bootstrap interval for BMM");
  double level = 0.95;
  std::size_t B = 1000;
  bool unfixed = false;
  ci->add_option("--level", level, "Confidence level")->capture_default_str();
  ci->add_option("--B", B)->capture_default_str();
  ci->add_option("--alpha", alpha)->capture_default_str();
  ci->add_option("--J", J);
  ci->add_option("--seed", seed)->capture_default_str();
  ci->add_option("--input", input)->capture_default_str();
  ci->add_flag("--unfixed", unfixed, "Redraw the Dirichlet weights in every replicate");

  // fib
  auto* fib = app.add_subcommand("fib", "Importance-sampling count of Fibonacci permutations");
  unsigned m = 20;
  std::size_t draws = 1000;
  std::string aggregator = "mean";
  fib->add_option("--m", m)->capture_default_str();
  fib->add_option("--draws", draws)->capture_default_str();
  fib->add_option("--aggregator", aggregator, "mean|bmm|abmm|mm")->capture_default_str();
  fib->add_option("--alpha", alpha)->capture_default_str();
  fib->add_option("--J", J);
  fib->add_option("--seed", seed)->capture_default_str();

  // density
  auto* density = app.add_subcommand("density", "Density and CDF of the Dirichlet mean on a grid");
  std::string values_text;
  std::size_t grid = 100;
  density->add_option("--values", values_text, "Comma-separated sample")->required();
  density->add_option("--alpha", alpha)->required();
  density->add_option("--grid", grid)->capture_default_str();
  density->add_option("--out", out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    bmm::set_worker_count(threads);

    if (*estimate) {
      const bmm::Sample sample = read_sample(input);
      const bmm::Method which = bmm::parse_method(method);
      const bmm::EstimatorConfig config{alpha, J, seed};
      config.validate();
      const double value = bmm::run_estimator(which, sample, config, g);
      json j{{"method", std::string(bmm::method_name(which))},
             {"estimate", value},
             {"n", sample.size()}};
      std::cout << j.dump() << '\n';
    } else if (*simulate) {
      const bmm::DistributionSpec dist = bmm::parse_distribution(dist_text);
      if (experiment == "bounds") {
        const std::size_t draws_j = J.value_or(n);
        json j;
        j["dist"] = bmm::to_string(dist);
        j["mean_median_gap"] = bound_json(bmm::mean_median_gap_check(dist));
        if (bmm::has_finite_variance(dist)) {
          j["mm_deviation"] = bound_json(bmm::mm_deviation_experiment(dist, n, delta, reps, seed));
          const auto mse = bmm::mse_identity_experiment(dist, n, alpha, draws_j, reps, seed);
          j["mse_identity"] = {{"lhs", mse.lhs},
                               {"mse_mean", mse.mse_mean},
                               {"discrepancy", mse.discrepancy},
                               {"correlation", mse.correlation},
                               {"var_mean", mse.var_mean},
                               {"var_p", mse.var_p},
                               {"identity_residual", mse.identity_residual},
                               {"residual_standard_error", mse.residual_standard_error},
                               {"trials", mse.trials}};
          const auto bias = bmm::median_bias_bounds(bmm::variance(dist), n, alpha);
          j["median_bias_bounds"] = {{"unconditional", bias.unconditional},
                                     {"conditional", bias.conditional}};
        }
        std::cout << j.dump(2) << '\n';
      } else if (experiment == "compare") {
        bmm::SimulationSpec spec;
        spec.dist = dist;
        spec.n = n;
        spec.estimators.clear();
        for (const auto& name : split_list(estimators)) spec.estimators.push_back(bmm::parse_method(name));
        spec.config = {alpha, J, seed};
        spec.replications = reps;
        spec.seed = seed;
        spec.g = g;
        const bmm::SimulationReport report = bmm::run_simulation(spec);
        std::string csv = "estimator,mse,mad,bias,std,mse_se\n";
        for (const auto& e : report.estimators) {
          csv += std::string(bmm::method_name(e.method)) + "," + fmt(e.mse) + "," + fmt(e.mad) + "," +
                 fmt(e.bias) + "," + fmt(e.std) + "," + fmt(e.mse_se) + "\n";
        }
        write_text(out, csv);
      } else {
        throw bmm::ConfigError("unknown experiment: " + experiment);
      }
    } else if (*ci) {
      const bmm::Sample sample = read_sample(input);
      bmm::CIConfig config;
      config.level_complement = 1.0 - level;
      config.B = B;
      config.J = J;
      config.alpha = alpha;
      config.seed = seed;
      config.fix_dirichlet_draws = !unfixed;
      const bmm::CIResult result = bmm::ci_bmm(sample, config);
      json j{{"lower", result.lower}, {"upper", result.upper}, {"point_estimate", result.point_estimate}};
      std::cout << j.dump() << '\n';
    } else if (*fib) {
      const bmm::Method which = bmm::parse_method(aggregator);
      const bmm::EstimatorConfig config{alpha, J, bmm::mix_seed(seed, 1)};
      config.validate();
      const auto report = bmm::is_estimate_fib(m, draws, which, config, seed);
      const double oracle = m <= 92 ? static_cast<double>(bmm::fib_oracle(m)) : bmm::fib_oracle_approx(m);
      json j{{"estimate", report.estimate},
             {"oracle", oracle},
             {"relative_error", (report.estimate - oracle) / oracle}};
      std::cout << j.dump() << '\n';
    } else if (*density) {
      if (grid == 0) throw bmm::ConfigError("grid must be positive");
      const bmm::DensitySpec spec(bmm::Sample(parse_value_list(values_text)), alpha);
      std::string csv = "y,pdf,cdf\n";
      const double lo = spec.sample().stats().min;
      const double hi = spec.sample().stats().max;
      for (std::size_t k = 0; k < grid; ++k) {
        const double y = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
        double pdf = 0.0;
        try {
          pdf = bmm::density_y(spec, y);
        } catch (const bmm::AtomError&) {
          continue;
        }
        csv += fmt(y) + "," + fmt(pdf) + "," + fmt(bmm::cdf_y(spec, y)) + "\n";
      }
      write_text(out, csv);
    }
  } catch (const bmm::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const bmm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return 0;
}
