#include "matsparql/algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace matsparql::algebra {

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<PredicateId>> rows) {
  DenseMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw std::invalid_argument("matrix must be square");
    std::size_t j = 0;
    for (PredicateId p : row) {
      if (p != 0) m.add(i, j, p);
      ++j;
    }
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::from_triples(const TripleSet& t) {
  DenseMatrix m(t.n);
  for (const auto& e : t.triples) m.add(e.row, e.col, e.val);
  return m;
}

void DenseMatrix::add(std::size_t i, std::size_t j, PredicateId p) {
  if (i >= n_ || j >= n_) throw std::out_of_range("cell index out of range");
  auto& c = cells_[i * n_ + j];
  auto it = std::lower_bound(c.begin(), c.end(), p);
  if (it == c.end() || *it != p) c.insert(it, p);
}

bool DenseMatrix::has(std::size_t i, std::size_t j, PredicateId p) const {
  const auto& c = cells_[i * n_ + j];
  return std::binary_search(c.begin(), c.end(), p);
}

BitVector::BitVector(std::initializer_list<int> bits) {
  for (int b : bits) bits_.push_back(b != 0 ? 1 : 0);
}

std::size_t BitVector::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

void check_indices(const DenseMatrix& a, const std::set<std::size_t>& idx) {
  if (!idx.empty() && *idx.rbegin() >= a.size()) throw std::out_of_range("selection index out of range");
}

}  // namespace

DenseMatrix select_rows(const DenseMatrix& a, const std::set<std::size_t>& rows) {
  check_indices(a, rows);
  DenseMatrix out(a.size());
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (PredicateId p : a.cell(i, j)) out.add(i, j, p);
    }
  }
  return out;
}

DenseMatrix select_cols(const DenseMatrix& a, const std::set<std::size_t>& cols) {
  check_indices(a, cols);
  DenseMatrix out(a.size());
  for (std::size_t j : cols) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (PredicateId p : a.cell(i, j)) out.add(i, j, p);
    }
  }
  return out;
}

BitVector rows_with_predicate(const DenseMatrix& a, PredicateId p, Orientation orientation) {
  BitVector y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < a.size() && !any; ++j) {
      any = orientation == Orientation::row ? a.has(i, j, p) : a.has(j, i, p);
    }
    y.set(i, any);
  }
  return y;
}

BindingMatrix predicate_positions(const DenseMatrix& a, PredicateId p) {
  BindingMatrix m{a.size(), {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.has(i, j, p)) m.nonzeros.emplace(i, j);
    }
  }
  return m;
}

BitVector vec_and(const BitVector& x, const BitVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  BitVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z.set(i, x.test(i) && y.test(i));
  return z;
}

BitVector vec_or(const BitVector& x, const BitVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  BitVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z.set(i, x.test(i) || y.test(i));
  return z;
}

BindingMatrix eval_single_edge(const DenseMatrix& a, PredicateId p) { return predicate_positions(a, p); }

BindingMatrix eval_chained_edge(const BindingMatrix& m_xy, const DenseMatrix& a, PredicateId p_yz) {
  if (m_xy.n != a.size()) throw std::invalid_argument("binding matrix dimension mismatch");
  BitVector v_y(a.size());
  for (const auto& [i, j] : m_xy.nonzeros) v_y.set(j);
  BindingMatrix out{a.size(), {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!v_y.test(i)) continue;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.has(i, j, p_yz)) out.nonzeros.emplace(i, j);
    }
  }
  return out;
}

GroupedResult grouped_eval(const DenseMatrix& a, std::span<const IncidentEdge> incident) {
  if (incident.empty()) throw std::invalid_argument("grouped evaluation needs at least one edge");
  GroupedResult r;
  r.binding = BitVector(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.binding.set(i);
  for (const auto& e : incident) {
    auto o = e.direction == Direction::out ? Orientation::row : Orientation::column;
    r.binding = vec_and(r.binding, rows_with_predicate(a, e.predicate, o));
  }
  for (const auto& e : incident) {
    BindingMatrix m{a.size(), {}};
    for (const auto& [i, j] : predicate_positions(a, e.predicate).nonzeros) {
      const std::size_t center = e.direction == Direction::out ? i : j;
      if (r.binding.test(center)) m.nonzeros.emplace(i, j);
    }
    r.matrices.push_back(std::move(m));
  }
  return r;
}

}  // namespace matsparql::algebra
