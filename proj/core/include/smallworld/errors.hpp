#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smallworld {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: DIMACS files, snapshots, graphs violating invariants.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  // 1-based line number of the offending input line, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A caller-supplied parameter outside its documented domain.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Weighted sampling was asked to draw from an all-zero weight vector.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was violated (e.g. greedy routing failed to progress).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace smallworld
