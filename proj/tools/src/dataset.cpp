#include "possim_cli/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "possim/error.hpp"

namespace possim::cli {

const Schema& contour_schema() {
  static const Schema s{"contour", {"theta", "pi"}};
  return s;
}
const Schema& validity_schema() {
  static const Schema s{"validity", {"alpha", "cdf", "band"}};
  return s;
}
const Schema& false_confidence_schema() {
  static const Schema s{"false-confidence", {"alpha", "assigner", "cdf"}};
  return s;
}
const Schema& equivalence_schema() {
  static const Schema s{"equivalence", {"u", "hitting", "contour", "mc_se"}};
  return s;
}
const Schema& coverage_schema() {
  static const Schema s{
      "coverage", {"method", "level", "coverage", "mean_length", "unbounded_count", "mc_se", "reps", "seed"}};
  return s;
}

std::string format_double(double v) {
  if (std::isnan(v)) throw DataError("NaN cannot be serialized");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  return std::get<std::string>(c);
}

}  // namespace

void check_rows(const Schema& schema, const std::vector<Row>& rows) {
  for (const auto& row : rows) {
    if (row.size() != schema.columns.size()) {
      throw DataError(schema.name + ": row has " + std::to_string(row.size()) + " fields, schema has " +
                      std::to_string(schema.columns.size()));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (const auto* d = std::get_if<double>(&row[j]); d != nullptr && std::isnan(*d)) {
        throw DataError(schema.name + ": NaN in column '" + schema.columns[j] + "'");
      }
      if (const auto* s = std::get_if<std::string>(&row[j])) {
        if (s->find_first_of(",\"\r\n") != std::string::npos) {
          throw DataError(schema.name + ": text in column '" + schema.columns[j] + "' needs quoting");
        }
      }
    }
  }
}

std::string to_csv(const Schema& schema, const std::vector<Row>& rows) {
  check_rows(schema, rows);
  std::string out;
  for (std::size_t j = 0; j < schema.columns.size(); ++j) {
    if (j > 0) out += ',';
    out += schema.columns[j];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += cell_text(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string to_jsonl(const Schema& schema, const std::vector<Row>& rows) {
  check_rows(schema, rows);
  std::string out;
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& name = schema.columns[j];
      if (const auto* d = std::get_if<double>(&row[j])) {
        if (std::isinf(*d)) {
          obj[name] = format_double(*d);
        } else {
          obj[name] = *d;
        }
      } else if (const auto* u = std::get_if<std::uint64_t>(&row[j])) {
        obj[name] = *u;
      } else {
        obj[name] = std::get<std::string>(row[j]);
      }
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move dataset into place at '" + path.string() + "'");
  }
}

void emit_dataset(const Schema& schema, const std::vector<Row>& rows, const std::filesystem::path& path,
                  OutputFormat format) {
  const std::string csv = to_csv(schema, rows);
  const std::string jsonl = to_jsonl(schema, rows);
  auto mirror = path;
  if (format == OutputFormat::csv) {
    mirror.replace_extension(".jsonl");
    write_atomic(path, csv);
    if (mirror != path) write_atomic(mirror, jsonl);
  } else {
    mirror.replace_extension(".csv");
    write_atomic(path, jsonl);
    if (mirror != path) write_atomic(mirror, csv);
  }
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') throw DataError("CSV lines must end in LF only");
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) throw DataError("CSV row width does not match its header");
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

double parse_double(const std::string& field) {
  if (field == "inf") return INFINITY;
  if (field == "-inf") return -INFINITY;
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) throw DataError("not a number: '" + field + "'");
  return v;
}

}  // namespace possim::cli
