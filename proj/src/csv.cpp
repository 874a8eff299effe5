#include "nctorus/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace nctorus {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto n : names) {
    if (!first) out_ << ',';
    out_ << n;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out_ << ',';
    out_ << format_g17(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::raw_row(std::string_view line) { out_ << line << '\n'; }

}  // namespace nctorus
