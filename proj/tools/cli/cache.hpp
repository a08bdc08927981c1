#pragma once

// Binary cache of an encoded dataset, keyed by the source file's size and
// modification time, the predicate filter and the preferred entity order.

#include <optional>
#include <string>
#include <vector>

#include "matsparql/rdf.hpp"

namespace matsparql::cli {

struct CacheKey {
  std::uint64_t source_size = 0;
  std::uint64_t source_mtime = 0;
  std::vector<std::string> predicate_filter;  // sorted; empty = all predicates
  std::vector<std::string> entity_order;

  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

CacheKey key_for(const std::string& source, std::vector<std::string> filter, std::vector<std::string> order);

void write_cache(const std::string& path, const CacheKey& key, const Encoded& data);

/// nullopt when the file is missing, unreadable, of another version, or
/// built for a different key.
std::optional<Encoded> read_cache(const std::string& path, const CacheKey& key);

}  // namespace matsparql::cli
