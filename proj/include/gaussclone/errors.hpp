#pragma once

#include <stdexcept>
#include <string>

namespace gaussclone {

// Error taxonomy shared across the library. Validation throws instead of
// asserting so the CLI can map failures onto exit codes.

class RangeError : public std::invalid_argument {
 public:
  explicit RangeError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

class IndexError : public std::out_of_range {
 public:
  explicit IndexError(const std::string& msg) : std::out_of_range(msg) {}
};

class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(const std::string& msg) : std::invalid_argument(msg) {}
};

class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gaussclone
