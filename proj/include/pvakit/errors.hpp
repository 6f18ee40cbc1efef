#pragma once

#include <stdexcept>
#include <string>

namespace pvakit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroDivide : Error {
  ZeroDivide() : Error("division by an identically zero expression") {}
};

struct UnluckyPoint : Error {
  explicit UnluckyPoint(int tries)
      : Error("denominator vanished at " + std::to_string(tries) + " sample points") {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotSkew : Error {
  NotSkew() : Error("bracket is not skewsymmetric") {}
};

struct Unsupported : Error {
  using Error::Error;
};

struct IncompleteAssignment : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int l, int c)
      : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

}  // namespace pvakit
