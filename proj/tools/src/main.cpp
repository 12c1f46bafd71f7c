#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "possim/error.hpp"
#include "possim_cli/run_config.hpp"

namespace {

using possim::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& c, std::string& format) {
  sub.add_option("--model", c.model, "cauchy, curved-normal or exp-eiv")->required();
  sub.add_option("--n", c.n, "curved-normal sample size");
  sub.add_option("--sign", c.sign, "curved-normal known sign of theta (+1 or -1)");
  sub.add_option("--density-form", c.density_form, "curved-normal conditional density: reference or exact-jacobian");
  sub.add_option("--lambda1", c.lambda1, "exp-eiv rate of the first error");
  sub.add_option("--lambda2", c.lambda2, "exp-eiv rate of the second error");
  sub.add_option("--xi", c.xi, "exp-eiv true nuisance value for simulations");
  sub.add_option("--y", c.y, "observation (cauchy) or sample values (curved-normal)")->delimiter(',');
  sub.add_option("--y1", c.y1, "first summary statistic");
  sub.add_option("--y2", c.y2, "second summary statistic");
  sub.add_option("--theta", c.theta, "true or queried parameter value");
  sub.add_option("--alpha", c.alpha, "level for regions and tests");
  sub.add_option("--level", c.level, "confidence level for intervals");
  sub.add_option("--grid", c.grid, "evaluation grid lo:hi:step");
  sub.add_option("--assertion", c.assertion, "set lo:hi[;lo:hi...] or points p[;p...]");
  sub.add_option("--statistic", c.statistic, "validate: contour, necessity or possibility");
  sub.add_option("--method", c.method, "coverage: im, fiducial or both");
  sub.add_option("--positivity", c.positivity, "flat-prior Bayes: none or reject");
  sub.add_option("--reps", c.reps, "replications");
  sub.add_option("--budget", c.budget, "Monte Carlo draws");
  sub.add_option("--workers", c.workers, "worker threads (0: hardware concurrency)");
  sub.add_option("--seed", c.seed, "master seed (default POSSIM_SEED or 1)");
  sub.add_option("--out", c.out, "dataset path; stdout when omitted");
  sub.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string format = "csv";
  try {
    config.seed = possim::cli::default_seed();
  } catch (const possim::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return possim::cli::kUsage;
  }

  CLI::App app{"Possibility-based inferential models: contours, regions, tests and simulation studies"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"contour", "posterior contour on a grid (theta,pi)"},
      {"region", "plausibility region at level 1 - alpha"},
      {"test", "test an assertion at level alpha"},
      {"validate", "validity CDF of a statistic over replications (alpha,cdf,band)"},
      {"coverage", "coverage and mean length of intervals"},
      {"false-confidence", "CDFs of belief in a false assertion (alpha,assigner,cdf)"},
      {"equivalence", "random-set hitting probabilities against the contour (u,hitting,contour,mc_se)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(*sub, config, format);
    sub->callback([&config, name = name] { config.subcommand = name; });
  }
  auto* baseline = app.add_subcommand("baseline", "comparison methods");
  baseline->require_subcommand(1);
  for (const std::string name : {"fiducial", "bayes"}) {
    auto* sub = baseline->add_subcommand(name, name == "fiducial" ? "generalized fiducial baseline"
                                                                   : "flat-prior Bayes baseline");
    add_common(*sub, config, format);
    sub->callback([&config, name] { config.subcommand = "baseline-" + name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? possim::cli::kOk : possim::cli::kUsage;
  }
  config.format = format == "jsonl" ? possim::cli::OutputFormat::jsonl : possim::cli::OutputFormat::csv;
  return possim::cli::dispatch(config, std::cout, std::cout, std::cerr);
}
