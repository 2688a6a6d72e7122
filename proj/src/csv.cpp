#include "tmlab/csv.hpp"

#include <charconv>
#include <cmath>

namespace tmlab {

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      os_ << f;
      continue;
    }
    os_ << '"';
    for (char c : f) {
      if (c == '"') os_ << '"';
      os_ << c;
    }
    os_ << '"';
  }
  os_ << "\r\n";
}

std::string formatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace tmlab
