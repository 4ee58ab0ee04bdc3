#include "cdfpen/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cdfpen {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_meta(std::ostream& out, std::string_view key, std::string_view value) {
  std::string flat(value);
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  out << "# " << key << ": " << flat << '\n';
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace cdfpen
