#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace nctorus {

/// Floating-point text with 17 significant digits; round-trips doubles and
/// keeps output files byte-stable across runs.
std::string format_g17(double value);

/// Comma-separated writer with LF line endings and g17 number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void header(std::initializer_list<std::string_view> names);
  void row(std::span<const double> values);
  void raw_row(std::string_view line);

 private:
  std::ofstream out_;
};

}  // namespace nctorus
