#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "possim/error.hpp"
#include "possim_cli/dataset.hpp"
#include "possim_cli/run_config.hpp"

using namespace possim;
using namespace possim::cli;

namespace {

struct Run {
  int status = 0;
  std::string data, summary, err;
};

Run run(const RunConfig& c) {
  std::ostringstream data, summary, err;
  Run r;
  r.status = dispatch(c, data, summary, err);
  r.data = data.str();
  r.summary = summary.str();
  r.err = err.str();
  return r;
}

RunConfig config(std::string sub, std::string model) {
  RunConfig c;
  c.subcommand = std::move(sub);
  c.model = std::move(model);
  return c;
}

}  // namespace

TEST_CASE("contour reproduces the Cauchy curve") {
  auto c = config("contour", "cauchy");
  c.y = {0.0};
  c.grid = "-20:20:0.05";
  const auto r = run(c);
  REQUIRE(r.status == kOk);
  const auto table = parse_csv(r.data);
  CHECK(table.header == std::vector<std::string>{"theta", "pi"});
  REQUIRE(table.rows.size() == 801);
  for (const auto& row : table.rows) {
    const double theta = parse_double(row[0]);
    CHECK(std::abs(parse_double(row[1]) - 2.0 * (1.0 - oracle::cauchy_cdf(std::abs(theta)))) < 1e-12);
  }
  CHECK(parse_double(table.rows[400][1]) == 1.0);
  CHECK(r.summary.rfind("contour ", 0) == 0);
}

TEST_CASE("region on the EIV instance is unbounded above") {
  auto c = config("region", "exp-eiv");
  c.y1 = 1.40;
  c.y2 = 0.50;
  c.alpha = 0.10;
  const auto r = run(c);
  REQUIRE(r.status == kOk);
  CHECK(r.summary.find("upper=inf") != std::string::npos);
  CHECK(r.summary.find("bounded=false") != std::string::npos);
  CHECK(std::count(r.summary.begin(), r.summary.end(), '\n') == 1);
}

TEST_CASE("test subcommand") {
  auto c = config("test", "cauchy");
  c.y = {0.0};
  c.assertion = "100:inf";
  c.alpha = 0.05;
  const auto r = run(c);
  REQUIRE(r.status == kOk);
  CHECK(r.summary.find("decision=reject") != std::string::npos);
}

TEST_CASE("validate is byte-identical across runs and worker counts") {
  auto c = config("validate", "cauchy");
  c.theta = 0.0;
  c.reps = 5000;
  c.seed = 1;
  c.workers = 1;
  const auto a = run(c);
  c.workers = 4;
  const auto b = run(c);
  REQUIRE(a.status == kOk);
  CHECK(a.data == b.data);
  CHECK(a.err == b.err);
  CHECK(parse_csv(a.data).header == std::vector<std::string>{"alpha", "cdf", "band"});
  CHECK(parse_csv(a.data).rows.size() == 1001);
}

TEST_CASE("datasets written to a path get a JSON-lines mirror") {
  const auto dir = std::filesystem::temp_directory_path() / "possim_cli_out";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto c = config("coverage", "cauchy");
  c.theta = 0.0;
  c.reps = 50;
  c.out = (dir / "cov.csv").string();
  const auto r = run(c);
  REQUIRE(r.status == kOk);
  CHECK(r.data.empty());
  CHECK(r.summary.find("im_coverage=") != std::string::npos);
  const auto table = read_csv(dir / "cov.csv");
  CHECK(table.header == coverage_schema().columns);
  CHECK(std::filesystem::exists(dir / "cov.jsonl"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("false-confidence and equivalence datasets") {
  auto fc = config("false-confidence", "exp-eiv");
  fc.theta = 10.0;
  fc.reps = 100;
  fc.budget = 5000;
  const auto f = run(fc);
  REQUIRE(f.status == kOk);
  const auto ft = parse_csv(f.data);
  CHECK(ft.header == false_confidence_schema().columns);
  CHECK(ft.rows.size() == 2 * 1001);

  for (const std::string model : {"cauchy", "curved-normal", "exp-eiv"}) {
    auto eq = config("equivalence", model);
    eq.y1 = 1.86;
    eq.y2 = 2.12;
    const auto e = run(eq);
    REQUIRE(e.status == kOk);
    const auto et = parse_csv(e.data);
    CHECK(et.header == equivalence_schema().columns);
    REQUIRE(et.rows.size() == 101);
    for (const auto& row : et.rows) {
      const double p = parse_double(row[2]);
      CHECK(std::abs(parse_double(row[1]) - p) <= oracle::mc_band(p, 100000));
    }
  }
}

TEST_CASE("baseline subcommands") {
  auto b = config("baseline-bayes", "exp-eiv");
  b.y1 = 1.40;
  b.y2 = 0.50;
  b.budget = 100000;
  const auto r = run(b);
  REQUIRE(r.status == kOk);
  CHECK(r.summary.find("probability=0.92") != std::string::npos);

  auto f = config("baseline-fiducial", "cauchy");
  f.y = {0.0};
  f.theta = 1.0;
  const auto fr = run(f);
  REQUIRE(fr.status == kOk);
  CHECK(fr.summary.find("halfline_possibility=0.25") != std::string::npos);
}

TEST_CASE("exit statuses") {
  CHECK(run(config("contour", "nope")).status == kUsage);
  CHECK(run(config("frobnicate", "cauchy")).status == kUsage);
  auto bad_alpha = config("region", "cauchy");
  bad_alpha.y = {0.0};
  bad_alpha.alpha = 2.0;
  CHECK(run(bad_alpha).status == kUsage);
  auto degenerate = config("region", "curved-normal");
  degenerate.y = {1.0, 1.0, 1.0};
  const auto d = run(degenerate);
  CHECK(d.status == kNumeric);
  CHECK_FALSE(d.err.empty());
  auto missing = config("region", "exp-eiv");
  CHECK(run(missing).status == kUsage);
  auto stray_out = config("region", "cauchy");
  stray_out.y = {0.0};
  stray_out.out = "unused.csv";
  const auto s = run(stray_out);
  CHECK(s.status == kUsage);
  CHECK(s.err.find("--out") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists("unused.csv"));
}

TEST_CASE("default seed from the environment") {
  ::unsetenv("POSSIM_SEED");
  CHECK(default_seed() == 1);
  ::setenv("POSSIM_SEED", "18446744073709551615", 1);
  CHECK(default_seed() == 18446744073709551615ull);
  ::setenv("POSSIM_SEED", "12x", 1);
  CHECK_THROWS_AS(default_seed(), ArgumentError);
  ::unsetenv("POSSIM_SEED");
}
