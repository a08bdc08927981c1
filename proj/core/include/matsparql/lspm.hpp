#pragma once

// Light-weight sparse matrix storage: predicate-filtered CSR/CSC with the
// empty rows (columns) squeezed out and tracked by a prefix elimination map.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <set>
#include <vector>

#include "matsparql/rdf.hpp"
#include "matsparql/types.hpp"

namespace matsparql {

using PredicateSet = std::set<PredicateId>;

struct SliceEntry {
  EntityId index = 0;  // column for a row slice, row for a column slice
  PredicateId val = 0;

  friend bool operator==(const SliceEntry&, const SliceEntry&) = default;
};

/// Row-wise storage. Original row i is non-empty iff mr[i+1] - mr[i] == 1,
/// in which case its entries live in [pr[mr[i]], pr[mr[i]+1]).
struct LspmCsr {
  std::size_t n = 0;
  PredicateSet keep;
  std::vector<std::uint32_t> mr;   // n + 1
  std::vector<std::uint32_t> pr;   // reduced rows + 1
  std::vector<PredicateId> val;    // nnz
  std::vector<EntityId> col;       // nnz

  std::size_t rows() const { return pr.empty() ? 0 : pr.size() - 1; }
  std::size_t nnz() const { return val.size(); }
  bool has_row(std::size_t orig) const { return mr[orig + 1] != mr[orig]; }
  std::size_t byte_size() const;
};

/// Column-wise mirror of LspmCsr.
struct LspmCsc {
  std::size_t n = 0;
  PredicateSet keep;
  std::vector<std::uint32_t> mc;
  std::vector<std::uint32_t> pc;
  std::vector<PredicateId> val;
  std::vector<EntityId> row;

  std::size_t cols() const { return pc.empty() ? 0 : pc.size() - 1; }
  std::size_t nnz() const { return val.size(); }
  bool has_col(std::size_t orig) const { return mc[orig + 1] != mc[orig]; }
  std::size_t byte_size() const;
};

LspmCsr build_csr(const TripleSet& t, const PredicateSet& keep);
LspmCsc build_csc(const TripleSet& t, const PredicateSet& keep);

/// Stored entries of original row `orig_row`, in storage order (ascending
/// column, then predicate). Empty when the row was eliminated.
std::span<const EntityId> row_cols(const LspmCsr& csr, std::size_t orig_row);
std::vector<SliceEntry> row_slice(const LspmCsr& csr, std::size_t orig_row);
std::vector<SliceEntry> col_slice(const LspmCsc& csc, std::size_t orig_col);

// Binary layout: 8-byte magic, u64 n, then keep, mr, pr, val, col (or
// keep, mc, pc, val, row), each as a little-endian u64 length followed by
// little-endian u32 elements.
void write_csr(std::ostream& out, const LspmCsr& csr);
LspmCsr read_csr(std::istream& in);
void write_csc(std::ostream& out, const LspmCsc& csc);
LspmCsc read_csc(std::istream& in);

namespace binio {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
void write_array(std::ostream& out, std::span<const std::uint32_t> a);
std::vector<std::uint32_t> read_array(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);
}  // namespace binio

}  // namespace matsparql
