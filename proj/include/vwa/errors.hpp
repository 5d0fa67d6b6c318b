#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vwa {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument: non-finite input, bad scale, index out of range, ...
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Every neighbor weight is zero, so the weighted average is undefined.
// Carries the current observation (and the deleted index for leave-one-out)
// so callers can report which evaluation point failed.
class DegenerateNeighborhoodError : public Error {
 public:
  DegenerateNeighborhoodError(const std::string& what, double current,
                              std::optional<std::size_t> deleted_index = {})
      : Error(what), current_(current), deleted_index_(deleted_index) {}

  double current() const { return current_; }
  std::optional<std::size_t> deleted_index() const { return deleted_index_; }

 private:
  double current_;
  std::optional<std::size_t> deleted_index_;
};

// Variance scale collapsed where a positive one is required
// (jackknife on fewer than two leave-one-out values, zero divisor, ...).
class DegenerateScaleError : public Error {
 public:
  explicit DegenerateScaleError(const std::string& what) : Error(what) {}
};

// Resampling could not produce a usable result (e.g. every bootstrap
// replication was degenerate).
class ResamplingError : public Error {
 public:
  explicit ResamplingError(const std::string& what) : Error(what) {}
};

}  // namespace vwa
