#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace matsparql {

/// Dense 0-based id shared by subjects and objects.
using EntityId = std::uint32_t;
/// Dense 1-based predicate id; 0 marks an empty matrix cell.
using PredicateId = std::uint32_t;

using VertexId = std::size_t;
using EdgeId = std::size_t;

inline constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string msg = "line " + std::to_string(line);
    if (column != 0) msg += ", column " + std::to_string(column);
    return msg + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class UnsupportedFeature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a plan mode cannot handle the query shape (e.g. direction
/// traversal with constant vertices).
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A worker touched a row or column its node assignment does not hold.
class SufficiencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace matsparql
