#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace possim::cli {

using Cell = std::variant<double, std::uint64_t, std::string>;
using Row = std::vector<Cell>;

struct Schema {
  std::string name;
  std::vector<std::string> columns;
};

// Column layouts consumed by the plotting scripts.
const Schema& contour_schema();          // theta,pi
const Schema& validity_schema();         // alpha,cdf,band
const Schema& false_confidence_schema(); // alpha,assigner,cdf
const Schema& equivalence_schema();      // u,hitting,contour,mc_se
const Schema& coverage_schema();         // method,level,coverage,mean_length,unbounded_count,mc_se,reps,seed

enum class OutputFormat { csv, jsonl };

/// Floats use 17 significant digits so they re-parse to the same double;
/// infinities are written as inf / -inf.
std::string format_double(double v);

/// Throws DataError when a row has the wrong width, a NaN, or a string that
/// would break the CSV layout.
void check_rows(const Schema& schema, const std::vector<Row>& rows);

std::string to_csv(const Schema& schema, const std::vector<Row>& rows);
std::string to_jsonl(const Schema& schema, const std::vector<Row>& rows);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes `path` in the requested format plus a mirror in the other one
/// (`<stem>.jsonl` next to a CSV, `<stem>.csv` next to JSON lines).
void emit_dataset(const Schema& schema, const std::vector<Row>& rows, const std::filesystem::path& path,
                  OutputFormat format);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
double parse_double(const std::string& field);

}  // namespace possim::cli
