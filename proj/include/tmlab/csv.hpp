#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tmlab {

// RFC 4180 style: fields quoted only when they contain , " CR or LF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

// Shortest round-trip representation; "inf", "-inf", "nan" for specials.
std::string formatDouble(double v);

}  // namespace tmlab
