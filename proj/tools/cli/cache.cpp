#include "cache.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "matsparql/lspm.hpp"

namespace matsparql::cli {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'Q', 'C', 'A', 'C', 'H', 'E'};
constexpr std::uint32_t kVersion = 1;

void write_strings(std::ostream& out, const std::vector<std::string>& v) {
  binio::write_u64(out, v.size());
  for (const auto& s : v) binio::write_string(out, s);
}

std::vector<std::string> read_strings(std::istream& in) {
  const auto n = binio::read_u64(in);
  if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("implausible count");
  std::vector<std::string> v;
  v.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) v.push_back(binio::read_string(in));
  return v;
}

}  // namespace

CacheKey key_for(const std::string& source, std::vector<std::string> filter, std::vector<std::string> order) {
  namespace fs = std::filesystem;
  CacheKey k;
  k.source_size = fs::file_size(source);
  k.source_mtime = static_cast<std::uint64_t>(fs::last_write_time(source).time_since_epoch().count());
  std::sort(filter.begin(), filter.end());
  k.predicate_filter = std::move(filter);
  k.entity_order = std::move(order);
  return k;
}

void write_cache(const std::string& path, const CacheKey& key, const Encoded& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write cache: " + path);
  out.write(kMagic, sizeof kMagic);
  binio::write_u32(out, kVersion);
  binio::write_u64(out, key.source_size);
  binio::write_u64(out, key.source_mtime);
  write_strings(out, key.predicate_filter);
  write_strings(out, key.entity_order);
  write_strings(out, data.dictionary.entities());
  write_strings(out, data.dictionary.predicates());
  std::vector<std::uint32_t> flat;
  flat.reserve(data.triples.triples.size() * 3);
  for (const auto& t : data.triples.triples) {
    flat.push_back(t.row);
    flat.push_back(t.col);
    flat.push_back(t.val);
  }
  binio::write_array(out, flat);
  if (!out) throw std::runtime_error("failed writing cache: " + path);
}

std::optional<Encoded> read_cache(const std::string& path, const CacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
    if (binio::read_u32(in) != kVersion) return std::nullopt;
    CacheKey stored;
    stored.source_size = binio::read_u64(in);
    stored.source_mtime = binio::read_u64(in);
    stored.predicate_filter = read_strings(in);
    stored.entity_order = read_strings(in);
    if (!(stored == key)) return std::nullopt;

    Encoded e;
    for (const auto& s : read_strings(in)) e.dictionary.intern_entity(s);
    for (const auto& s : read_strings(in)) e.dictionary.intern_predicate(s);
    const auto flat = binio::read_array(in);
    if (flat.size() % 3 != 0) return std::nullopt;
    e.triples.n = e.dictionary.entity_count();
    e.triples.predicate_count = e.dictionary.predicate_count();
    for (std::size_t i = 0; i < flat.size(); i += 3) {
      const EncodedTriple t{flat[i], flat[i + 1], flat[i + 2]};
      if (t.row >= e.triples.n || t.col >= e.triples.n || t.val == 0 || t.val > e.triples.predicate_count) {
        return std::nullopt;
      }
      e.triples.triples.push_back(t);
    }
    return e;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace matsparql::cli
