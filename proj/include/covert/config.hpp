#pragma once

// Flat key = value parameter files and report serialization (CSV and
// JSON lines, floats at 17 significant digits).
//
//   # comment
//   theorem = 1
//   m = 10, 30, 100        # comma lists are grid axes
//   moment_constant = exact

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covert/engine.hpp"

namespace covert {

struct ParsedConfig {
    SweepSpec spec;
    /// Keys present in the file, in file order.
    std::vector<std::string> keys;

    bool has(std::string_view key) const;
};

/// Validated sweep settings with defaults filled. `theorem` supplies the theorem when
/// the file has none; a conflicting value is rejected. Errors name the key.
ParsedConfig parse_config(std::string_view text, std::optional<int> theorem = std::nullopt);

enum class OutputFormat { csv, json_lines };

/// Accepts "csv", "jsonl" and "json-lines".
OutputFormat parse_output_format(std::string_view name);
std::string_view file_extension(OutputFormat format);

/// %.17g, with ".0" appended to integral values so they read back as floats.
std::string format_double(double value);

void emit_report(const ExperimentReport& report, OutputFormat format, std::ostream& out);

/// Writes to `path`; IoError carries the path on failure.
void write_report(const ExperimentReport& report, OutputFormat format, const std::filesystem::path& path);

ExperimentReport parse_report(std::string_view text, OutputFormat format);

}  // namespace covert
