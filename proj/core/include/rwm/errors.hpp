#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwm {

// Argument and precondition violations throw std::invalid_argument.
// The types below cover the remaining failure classes callers dispatch on.

/// Not enough history to evaluate a rolling statistic.
class NotEnoughData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero standard deviation; the s-score is undefined for this window.
class DegenerateVolatility : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A proven regret bound failed to hold; always an implementation defect.
class BoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// File-system failure. The message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV content. row() is the 1-based data row (header excluded).
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace rwm
