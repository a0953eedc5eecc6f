#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gnnkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's mathematical domain (log of a negative,
/// probability outside (0,1), label out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structural problem with a graph. Carries the offending vertex or edge
/// index when one exists.
class GraphError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit GraphError(const std::string& what, std::size_t index = npos)
      : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent dataset file.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (unknown key, bad value, missing path).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gnnkit
