#ifndef BRNAGG_ERRORS_HPP
#define BRNAGG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace brnagg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the formula (e.g. logit(0)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Both terms of an aggregation denominator vanish, e.g. one input 0 and the
/// other 1. No finite forecast is defined.
class UndefinedAggregation : public Error {
 public:
  using Error::Error;
};

/// A value is syntactically fine but out of range (e.g. balance:1.5).
class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Malformed input data. Carries the 1-based line number when known (0 if not).
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Too few usable observations for an estimate.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Every observation was removed by the estimator's filters.
class AllFiltered : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

/// Records on a case that analyses must skip (mu = 0.5 for classification).
class ExcludedCase : public Error {
 public:
  using Error::Error;
};

}  // namespace brnagg

#endif  // BRNAGG_ERRORS_HPP
