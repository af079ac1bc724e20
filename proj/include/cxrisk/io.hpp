#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cxrisk/scenario.hpp"

namespace cxrisk {

enum class InputFormat { csv, json };

std::string_view to_string(InputFormat f);
/// "csv" or "json"; throws ConfigError otherwise.
InputFormat parse_input_format(std::string_view name);

// Scenario files. CSV: a header line "k=2,1" followed by one flat row per
// vector (block 1 left to right, then block 2, ...). JSON:
// {"shape": [2, 1], "vectors": [[...], ...]}. Rows are numbered from 1 in
// error messages; an empty data section is an empty list.
//
// All errors are ConfigError with `source` as prefix.

std::vector<ScenarioVector> parse_scenarios_csv(std::string_view text, const std::string& source = "<csv>");
std::vector<ScenarioVector> parse_scenarios_json(std::string_view text, const std::string& source = "<json>");
std::vector<ScenarioVector> load_scenarios(const std::filesystem::path& path, InputFormat format);

/// Whole file as a string; ConfigError if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cxrisk
