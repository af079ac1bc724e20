#include "cxrisk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cxrisk/errors.hpp"

namespace cxrisk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw ConfigError(source + ": " + what);
}

ScenarioSpace space_from_shape(const std::vector<long long>& k, const std::string& source) {
  if (k.empty()) fail(source, "shape must list at least one component");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 1) fail(source, "shape entry " + std::to_string(i) + " must be >= 1");
    out.push_back(static_cast<std::size_t>(k[i]));
  }
  return ScenarioSpace(std::move(out));
}

ScenarioVector make_row(const ScenarioSpace& space, const std::vector<double>& flat, std::size_t row,
                        const std::string& source) {
  if (flat.size() != space.total_dimension()) {
    fail(source, "row " + std::to_string(row) + ": expected " + std::to_string(space.total_dimension()) +
                     " values, got " + std::to_string(flat.size()));
  }
  return ScenarioVector::unflatten(space, flat);
}

}  // namespace

std::string_view to_string(InputFormat f) { return f == InputFormat::csv ? "csv" : "json"; }

InputFormat parse_input_format(std::string_view name) {
  if (name == "csv") return InputFormat::csv;
  if (name == "json") return InputFormat::json;
  throw ConfigError("unknown input format '" + std::string(name) + "' (expected csv or json)");
}

std::vector<ScenarioVector> parse_scenarios_csv(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines = split(text, '\n');
  std::size_t at = 0;
  while (at < lines.size() && lines[at].empty()) ++at;
  if (at == lines.size() || !lines[at].starts_with("k=")) fail(source, "missing header line 'k=<k_1>,...,<k_d>'");

  std::vector<long long> k;
  for (std::string_view cell : split(lines[at].substr(2), ',')) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      fail(source, "header: '" + std::string(cell) + "' is not an integer");
    }
    k.push_back(v);
  }
  const ScenarioSpace space = space_from_shape(k, source);

  std::vector<ScenarioVector> out;
  std::size_t row = 0;
  for (++at; at < lines.size(); ++at) {
    if (lines[at].empty()) continue;
    ++row;
    std::vector<double> flat;
    std::size_t column = 0;
    for (std::string_view cell : split(lines[at], ',')) {
      ++column;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        fail(source, "row " + std::to_string(row) + ", column " + std::to_string(column) +
                         ": non-numeric cell '" + std::string(cell) + "'");
      }
      flat.push_back(v);
    }
    out.push_back(make_row(space, flat, row, source));
  }
  return out;
}

std::vector<ScenarioVector> parse_scenarios_json(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(source, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("shape")) fail(source, "missing 'shape' field");
  const auto& shape = doc["shape"];
  if (!shape.is_array()) fail(source, "'shape' must be an array of integers");
  std::vector<long long> k;
  for (const auto& v : shape) {
    if (!v.is_number_integer()) fail(source, "'shape' must be an array of integers");
    k.push_back(v.get<long long>());
  }
  const ScenarioSpace space = space_from_shape(k, source);

  std::vector<ScenarioVector> out;
  if (!doc.contains("vectors")) return out;
  const auto& vectors = doc["vectors"];
  if (!vectors.is_array()) fail(source, "'vectors' must be an array of rows");
  std::size_t row = 0;
  for (const auto& r : vectors) {
    ++row;
    if (!r.is_array()) fail(source, "row " + std::to_string(row) + ": not an array");
    std::vector<double> flat;
    std::size_t column = 0;
    for (const auto& cell : r) {
      ++column;
      if (!cell.is_number()) {
        fail(source, "row " + std::to_string(row) + ", column " + std::to_string(column) + ": non-numeric cell");
      }
      flat.push_back(cell.get<double>());
    }
    out.push_back(make_row(space, flat, row, source));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<ScenarioVector> load_scenarios(const std::filesystem::path& path, InputFormat format) {
  const std::string text = read_text_file(path);
  return format == InputFormat::csv ? parse_scenarios_csv(text, path.string())
                                    : parse_scenarios_json(text, path.string());
}

}  // namespace cxrisk
