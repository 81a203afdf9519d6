#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"

using nlohmann::json;

namespace {

const std::string kCli = BMM_CLI_PATH;

oracle::CommandResult cli(const std::string& args, const std::string& stdin_text = "") {
  std::string command;
  if (!stdin_text.empty()) command = "printf '" + stdin_text + "' | ";
  command += "'" + kCli + "' " + args + " 2>/dev/null";
  return oracle::run_command(command);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("bmm_cli_test_" + name);
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("estimate reads standard input and prints JSON") {
  const auto r = cli("estimate --method mean", "1\\n2\\n3\\n10\\n");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("method") == "mean");
  CHECK(j.at("estimate").get<double>() == 4.0);
  CHECK(j.at("n").get<int>() == 4);
}

TEST_CASE("estimate reads a file") {
  const auto path = temp_file("values.txt", "0\n0\n3\n\n");
  const auto r = cli("estimate --method abmm --alpha 1 --input " + path.string());
  REQUIRE(r.status == 0);
  CHECK_THAT(json::parse(r.out).at("estimate").get<double>(), Catch::Matchers::WithinRel(14.0 / 15.0, 1e-14));
  const auto hl = cli("estimate --method hl --input " + path.string());
  CHECK(json::parse(hl.out).at("estimate").get<double>() == 1.5);  // averages 0, 1.5, 1.5
}

TEST_CASE("every method runs from the command line") {
  for (const std::string m : {"mean", "median", "bmm", "abmm", "mm", "hl"}) {
    const auto r = cli("estimate --method " + m + " --J 50 --g 2 --seed 4", "5\\n1\\n2\\n8\\n3\\n");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out).at("method") == m);
  }
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(cli("").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("estimate --method trimmed", "1\\n").status == 2);
  CHECK(cli("estimate", "1\\nabc\\n").status == 2);
  CHECK(cli("estimate --input /nonexistent/values.txt").status == 2);
  CHECK(cli("estimate --alpha 0", "1\\n2\\n").status == 2);
  CHECK(cli("simulate --n 10").status == 2);
  CHECK(cli("simulate --dist 'cauchy(0,1)'").status == 2);
  CHECK(cli("ci --B 1", "1\\n2\\n3\\n").status == 2);
  CHECK(cli("fib --m 0").status == 2);
  CHECK(cli("density --values 0,1 --alpha 2").status == 2);
}

TEST_CASE("numerical failures exit with status 3") {
  // A concentration this small underflows every Dirichlet redraw.
  CHECK(cli("estimate --alpha 1e-320", "1\\n2\\n3\\n").status == 3);
}

TEST_CASE("simulate writes the MSE table") {
  const auto out = std::filesystem::temp_directory_path() / "bmm_cli_test_sim.csv";
  std::filesystem::remove(out);
  const auto r = cli("simulate --dist 'pareto(0,1000,2.5)' --n 30 --reps 50 --estimators mean,bmm,mm --alpha 1 --J 30 --seed 1 --out " + out.string());
  REQUIRE(r.status == 0);
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rows = lines(buf.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "estimator,mse,mad,bias,std,mse_se");
  CHECK(rows[1].rfind("mean,", 0) == 0);
  CHECK(rows[2].rfind("bmm,", 0) == 0);
  CHECK(rows[3].rfind("mm,", 0) == 0);
}

TEST_CASE("simulate --experiment=bounds prints bound reports") {
  const auto r = cli("simulate --experiment=bounds --dist 'normal(0,1)' --n 50 --reps 200 --seed 3");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  for (const char* key : {"mean_median_gap", "mm_deviation"}) {
    CHECK(j.at(key).contains("bound_value"));
    CHECK(j.at(key).contains("satisfied"));
  }
  CHECK(j.at("mse_identity").contains("identity_residual"));
}

TEST_CASE("ci prints an interval") {
  const auto path = temp_file("ci.txt", "1\n2\n3\n10\n5\n4\n");
  const auto r = cli("ci --level 0.9 --B 200 --alpha 1 --J 20 --seed 3 --input " + path.string());
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("lower").get<double>() <= j.at("point_estimate").get<double>());
  CHECK(j.at("point_estimate").get<double>() <= j.at("upper").get<double>());
}

TEST_CASE("fib reports the estimate against the exact count") {
  const auto r = cli("fib --m 2 --draws 10 --aggregator mean --seed 1");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("estimate").get<double>() == 2.0);
  CHECK(j.at("oracle").get<double>() == 2.0);
  CHECK(j.at("relative_error").get<double>() == 0.0);
  const auto big = json::parse(cli("fib --m 120 --draws 100 --aggregator bmm --seed 1").out);
  CHECK(big.at("oracle").get<double>() > 1e24);
}

TEST_CASE("density prints a CSV grid that skips atoms") {
  const auto r = cli("density --values 0,0.5,1 --alpha 0.4 --grid 4");
  REQUIRE(r.status == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] == "y,pdf,cdf");
  CHECK(rows.size() == 5);
  const auto odd = lines(cli("density --values 0,0.5,1 --alpha 0.4 --grid 5").out);
  CHECK(odd.size() == 5);  // the centre point is an atom
}

TEST_CASE("density can write to a file") {
  const auto out = std::filesystem::temp_directory_path() / "bmm_cli_test_density.csv";
  std::filesystem::remove(out);
  REQUIRE(cli("density --values 0,1 --alpha 0.5 --grid 10 --out " + out.string()).status == 0);
  CHECK(std::filesystem::file_size(out) > 0);
}

TEST_CASE("outputs are identical across runs and worker counts") {
  const std::string sim = "simulate --dist 'expo(0.5,0)' --n 40 --reps 100 --estimators mean,bmm,abmm --J 40 --seed 5";
  const auto a = cli(sim + " --threads 1");
  CHECK(a.out == cli(sim + " --threads 1").out);
  CHECK(a.out == cli(sim + " --threads 4").out);
  const std::string ci = "ci --B 200 --J 30 --seed 2 --threads ";
  CHECK(cli(ci + "1", "1\\n5\\n2\\n9\\n4\\n").out == cli(ci + "4", "1\\n5\\n2\\n9\\n4\\n").out);
  const std::string fib = "fib --m 40 --draws 500 --aggregator bmm --seed 8 --threads ";
  CHECK(cli(fib + "1").out == cli(fib + "4").out);
}
