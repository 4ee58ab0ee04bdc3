#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace cdfpen {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal representation; identical across runs.
std::string format_number(double value);

/// Writes "# key: value" metadata lines. Multi-line values are flattened.
void write_meta(std::ostream& out, std::string_view key, std::string_view value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace cdfpen
