#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace variastar {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (bad heuristic text, v_ref <= 0, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Map text that does not follow the octile map format. line() is 1-based.
class MapParseError : public Error {
 public:
  MapParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Start/goal that is out of bounds, occupied, or otherwise unusable.
class InvalidNodeError : public Error {
 public:
  using Error::Error;
};

// An iterative minimizer ran out of iterations. residual() is the last
// convergence measure (deviation or gradient norm, depending on the caller).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace variastar
