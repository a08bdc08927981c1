#pragma once

// Dense reference implementation of the AND/OR semiring operations used to
// describe query evaluation. Small-n only; the production path lives in the
// executor and is cross-checked against these functions in tests.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "matsparql/rdf.hpp"
#include "matsparql/types.hpp"

namespace matsparql::algebra {

/// n x n matrix of predicate ids. A cell may hold several predicates
/// (multigraph); "A(i,j) = p" means p is among them.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n = 0) : n_(n), cells_(n * n) {}

  /// Row-major grid of single values, 0 for empty.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<PredicateId>> rows);
  static DenseMatrix from_triples(const TripleSet& t);

  std::size_t size() const { return n_; }
  void add(std::size_t i, std::size_t j, PredicateId p);
  bool has(std::size_t i, std::size_t j, PredicateId p) const;
  const std::vector<PredicateId>& cell(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::vector<PredicateId>> cells_;  // each sorted, unique
};

class BitVector {
 public:
  explicit BitVector(std::size_t n = 0) : bits_(n, 0) {}
  BitVector(std::initializer_list<int> bits);

  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool v = true) { bits_.at(i) = v ? 1 : 0; }
  std::size_t count() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BindingMatrix {
  std::size_t n = 0;
  std::set<std::pair<std::size_t, std::size_t>> nonzeros;

  friend bool operator==(const BindingMatrix&, const BindingMatrix&) = default;
};

enum class Orientation { row, column };
enum class Direction { out, in };

DenseMatrix select_rows(const DenseMatrix& a, const std::set<std::size_t>& rows);
DenseMatrix select_cols(const DenseMatrix& a, const std::set<std::size_t>& cols);

/// A (x) u_p (row) or A^T (x) u_p (column).
BitVector rows_with_predicate(const DenseMatrix& a, PredicateId p, Orientation orientation);

/// S_p (x) A.
BindingMatrix predicate_positions(const DenseMatrix& a, PredicateId p);

BitVector vec_and(const BitVector& x, const BitVector& y);
BitVector vec_or(const BitVector& x, const BitVector& y);

BindingMatrix eval_single_edge(const DenseMatrix& a, PredicateId p);

/// Bindings of the shared vertex are the columns of `m_xy` holding a
/// nonzero; the result keeps positions of `p_yz` in those rows of `a`.
BindingMatrix eval_chained_edge(const BindingMatrix& m_xy, const DenseMatrix& a, PredicateId p_yz);

struct IncidentEdge {
  PredicateId predicate = 0;
  Direction direction = Direction::out;
};

struct GroupedResult {
  BitVector binding;                   // v for the center vertex
  std::vector<BindingMatrix> matrices;  // one per incident edge, same order
};

/// Evaluates all incident edges of one vertex together: the center's
/// binding vector is the AND of per-edge presence vectors, and each edge's
/// binding matrix is restricted to rows (out) or columns (in) where it holds.
GroupedResult grouped_eval(const DenseMatrix& a, std::span<const IncidentEdge> incident);

}  // namespace matsparql::algebra
