#pragma once

#include <stdexcept>
#include <string>

namespace tmlab {

enum class Errc {
  InvalidArgument,
  CapExceeded,
  InsufficientPrefix,
  OutOfRange,
  Instability,
  UndefinedPoint,
  IsAFactor,
  PrefixComparable,
  Unsupported,
  GridExhausted,
};

const char* errcName(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errcName(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace tmlab
