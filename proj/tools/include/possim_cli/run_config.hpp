#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "possim_cli/dataset.hpp"

namespace possim::cli {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kOk = 0, kFailure = 1, kUsage = 2, kNumeric = 3 };

/// Everything one invocation needs. Fields not used by a subcommand are ignored.
struct RunConfig {
  /// contour, region, test, validate, coverage, false-confidence,
  /// equivalence, baseline-fiducial or baseline-bayes.
  std::string subcommand;
  /// cauchy, curved-normal or exp-eiv.
  std::string model;

  // Model parameters.
  int n = 10;
  int sign = +1;
  std::string density_form = "reference";
  double lambda1 = 5.0;
  double lambda2 = 5.0;
  double xi = 0.1;

  // Observed data: --y values (Cauchy observation or curved-normal sample) or summary statistics.
  std::vector<double> y;
  std::optional<double> y1;
  std::optional<double> y2;

  std::optional<double> theta;
  double alpha = 0.05;
  double level = 0.95;
  std::string grid;
  std::string assertion;
  std::string statistic = "contour";
  std::string method = "im";
  std::string positivity = "none";

  std::size_t reps = 1000;
  std::size_t budget = 100000;
  std::size_t workers = 0;
  std::uint64_t seed = 1;
  std::string out;
  OutputFormat format = OutputFormat::csv;
};

/// Default seed: POSSIM_SEED when set to an unsigned integer, else 1.
std::uint64_t default_seed();

/// Runs the subcommand. Datasets go to `config.out` (atomically, with a
/// mirror in the other format) or to `data` when no path is given; the
/// one-line summary record goes to `summary`. Errors are reported on `err`
/// and mapped to exit statuses 2 (usage, unknown model) and 3 (numeric).
int dispatch(const RunConfig& config, std::ostream& data, std::ostream& summary, std::ostream& err);

}  // namespace possim::cli
