#include "matsparql/lspm.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace matsparql {

namespace {

// Shared builder: `major` picks the compressed dimension (row for CSR).
template <typename Major, typename Minor>
void build_compressed(const TripleSet& t, const PredicateSet& keep, Major major, Minor minor,
                      std::vector<std::uint32_t>& m, std::vector<std::uint32_t>& p,
                      std::vector<PredicateId>& val, std::vector<EntityId>& idx) {
  std::vector<EncodedTriple> kept;
  kept.reserve(t.triples.size());
  for (const auto& e : t.triples) {
    if (keep.contains(e.val)) kept.push_back(e);
  }
  std::sort(kept.begin(), kept.end(), [&](const EncodedTriple& a, const EncodedTriple& b) {
    return std::tuple(major(a), minor(a), a.val) < std::tuple(major(b), minor(b), b.val);
  });

  m.assign(t.n + 1, 0);
  p.assign(1, 0);
  val.clear();
  idx.clear();
  val.reserve(kept.size());
  idx.reserve(kept.size());

  std::size_t k = 0;
  for (std::size_t i = 0; i < t.n; ++i) {
    const std::size_t begin = k;
    while (k < kept.size() && major(kept[k]) == i) {
      val.push_back(kept[k].val);
      idx.push_back(minor(kept[k]));
      ++k;
    }
    if (k != begin) p.push_back(static_cast<std::uint32_t>(k));
    m[i + 1] = static_cast<std::uint32_t>(p.size() - 1);
  }
}

constexpr std::array<char, 8> kCsrMagic{'L', 'S', 'P', 'M', 'C', 'S', 'R', '1'};
constexpr std::array<char, 8> kCscMagic{'L', 'S', 'P', 'M', 'C', 'S', 'C', '1'};

void write_magic(std::ostream& out, const std::array<char, 8>& magic) { out.write(magic.data(), 8); }

void expect_magic(std::istream& in, const std::array<char, 8>& magic) {
  std::array<char, 8> got{};
  in.read(got.data(), 8);
  if (!in || got != magic) throw std::runtime_error("bad LSpM header");
}

std::vector<std::uint32_t> keep_array(const PredicateSet& keep) { return {keep.begin(), keep.end()}; }

}  // namespace

std::size_t LspmCsr::byte_size() const {
  return sizeof(std::uint32_t) * (mr.size() + pr.size() + val.size() + col.size());
}

std::size_t LspmCsc::byte_size() const {
  return sizeof(std::uint32_t) * (mc.size() + pc.size() + val.size() + row.size());
}

LspmCsr build_csr(const TripleSet& t, const PredicateSet& keep) {
  LspmCsr csr;
  csr.n = t.n;
  csr.keep = keep;
  build_compressed(
      t, keep, [](const EncodedTriple& e) { return e.row; }, [](const EncodedTriple& e) { return e.col; },
      csr.mr, csr.pr, csr.val, csr.col);
  return csr;
}

LspmCsc build_csc(const TripleSet& t, const PredicateSet& keep) {
  LspmCsc csc;
  csc.n = t.n;
  csc.keep = keep;
  build_compressed(
      t, keep, [](const EncodedTriple& e) { return e.col; }, [](const EncodedTriple& e) { return e.row; },
      csc.mc, csc.pc, csc.val, csc.row);
  return csc;
}

std::span<const EntityId> row_cols(const LspmCsr& csr, std::size_t orig_row) {
  if (orig_row >= csr.n) throw std::out_of_range("row index out of range");
  if (!csr.has_row(orig_row)) return {};
  const auto r = csr.mr[orig_row];
  return std::span<const EntityId>(csr.col).subspan(csr.pr[r], csr.pr[r + 1] - csr.pr[r]);
}

std::vector<SliceEntry> row_slice(const LspmCsr& csr, std::size_t orig_row) {
  if (orig_row >= csr.n) throw std::out_of_range("row index out of range");
  std::vector<SliceEntry> out;
  if (!csr.has_row(orig_row)) return out;
  const auto r = csr.mr[orig_row];
  for (auto k = csr.pr[r]; k < csr.pr[r + 1]; ++k) out.push_back({csr.col[k], csr.val[k]});
  return out;
}

std::vector<SliceEntry> col_slice(const LspmCsc& csc, std::size_t orig_col) {
  if (orig_col >= csc.n) throw std::out_of_range("column index out of range");
  std::vector<SliceEntry> out;
  if (!csc.has_col(orig_col)) return out;
  const auto c = csc.mc[orig_col];
  for (auto k = csc.pc[c]; k < csc.pc[c + 1]; ++k) out.push_back({csc.row[k], csc.val[k]});
  return out;
}

namespace binio {

void write_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

std::uint32_t read_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw std::runtime_error("truncated binary input");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw std::runtime_error("truncated binary input");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void write_array(std::ostream& out, std::span<const std::uint32_t> a) {
  write_u64(out, a.size());
  for (auto v : a) write_u32(out, v);
}

std::vector<std::uint32_t> read_array(std::istream& in) {
  const auto len = read_u64(in);
  if (len > (std::uint64_t{1} << 34)) throw std::runtime_error("implausible array length");
  std::vector<std::uint32_t> a(len);
  for (auto& v : a) v = read_u32(in);
  return a;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const auto len = read_u64(in);
  if (len > (std::uint64_t{1} << 32)) throw std::runtime_error("implausible string length");
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("truncated binary input");
  return s;
}

}  // namespace binio

void write_csr(std::ostream& out, const LspmCsr& csr) {
  write_magic(out, kCsrMagic);
  binio::write_u64(out, csr.n);
  binio::write_array(out, keep_array(csr.keep));
  binio::write_array(out, csr.mr);
  binio::write_array(out, csr.pr);
  binio::write_array(out, csr.val);
  binio::write_array(out, csr.col);
}

LspmCsr read_csr(std::istream& in) {
  expect_magic(in, kCsrMagic);
  LspmCsr csr;
  csr.n = binio::read_u64(in);
  auto keep = binio::read_array(in);
  csr.keep = PredicateSet(keep.begin(), keep.end());
  csr.mr = binio::read_array(in);
  csr.pr = binio::read_array(in);
  csr.val = binio::read_array(in);
  csr.col = binio::read_array(in);
  if (csr.mr.size() != csr.n + 1 || csr.pr.empty() || csr.val.size() != csr.col.size() ||
      csr.pr.back() != csr.val.size() || csr.mr.back() + 1 != csr.pr.size()) {
    throw std::runtime_error("inconsistent CSR arrays");
  }
  return csr;
}

void write_csc(std::ostream& out, const LspmCsc& csc) {
  write_magic(out, kCscMagic);
  binio::write_u64(out, csc.n);
  binio::write_array(out, keep_array(csc.keep));
  binio::write_array(out, csc.mc);
  binio::write_array(out, csc.pc);
  binio::write_array(out, csc.val);
  binio::write_array(out, csc.row);
}

LspmCsc read_csc(std::istream& in) {
  expect_magic(in, kCscMagic);
  LspmCsc csc;
  csc.n = binio::read_u64(in);
  auto keep = binio::read_array(in);
  csc.keep = PredicateSet(keep.begin(), keep.end());
  csc.mc = binio::read_array(in);
  csc.pc = binio::read_array(in);
  csc.val = binio::read_array(in);
  csc.row = binio::read_array(in);
  if (csc.mc.size() != csc.n + 1 || csc.pc.empty() || csc.val.size() != csc.row.size() ||
      csc.pc.back() != csc.val.size() || csc.mc.back() + 1 != csc.pc.size()) {
    throw std::runtime_error("inconsistent CSC arrays");
  }
  return csc;
}

}  // namespace matsparql
