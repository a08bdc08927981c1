#pragma once

// N-Triples ingestion and dictionary encoding.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "matsparql/types.hpp"

namespace matsparql {

/// One data line. Terms are stored in canonical form: IRIs and bare
/// identifiers without angle brackets, literals verbatim including quotes
/// and any language/datatype suffix.
struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const RawTriple&, const RawTriple&) = default;
};

/// Canonical form of a single term token (`<x>` -> `x`, `"l"` unchanged).
std::string canonical_term(std::string_view token);

/// Printable form of a canonical term (IRIs re-bracketed, literals as-is).
std::string display_term(std::string_view canonical);

class Dictionary {
 public:
  /// Returns the id of `term`, assigning the next dense id on first use.
  EntityId intern_entity(const std::string& term);
  PredicateId intern_predicate(const std::string& term);

  EntityId entity_id(std::string_view term) const;        // kAbsent if unknown
  PredicateId predicate_id(std::string_view term) const;  // 0 if unknown

  const std::string& entity(EntityId id) const { return entities_.at(id); }
  const std::string& predicate(PredicateId id) const { return predicates_.at(id - 1); }

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t predicate_count() const { return predicates_.size(); }

  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<std::string>& predicates() const { return predicates_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, EntityId, Hash, std::equal_to<>> entity_ids_;
  std::unordered_map<std::string, PredicateId, Hash, std::equal_to<>> predicate_ids_;
  std::vector<std::string> entities_;
  std::vector<std::string> predicates_;
};

struct EncodedTriple {
  EntityId row = 0;
  EntityId col = 0;
  PredicateId val = 0;

  friend auto operator<=>(const EncodedTriple&, const EncodedTriple&) = default;
};

/// Coordinate form of the RDF matrix. Entries with equal (row, col) are
/// allowed as long as their predicates differ.
struct TripleSet {
  std::size_t n = 0;
  std::size_t predicate_count = 0;
  std::vector<EncodedTriple> triples;
};

std::vector<RawTriple> parse_ntriples(std::istream& in);
std::vector<RawTriple> parse_ntriples_file(const std::string& path);

std::vector<RawTriple> filter_predicates(std::span<const RawTriple> raw,
                                         const std::unordered_set<std::string>& query_predicates);

struct Encoded {
  Dictionary dictionary;
  TripleSet triples;
};

/// Dictionary-encodes `filtered`. Entities listed in `preferred_order` that
/// occur in the data are numbered first, in that order; all others by first
/// appearance (subject, then object, in input order). Predicates always by
/// first appearance. Identical triples are collapsed.
Encoded encode(std::span<const RawTriple> filtered,
               std::span<const std::string> preferred_order = {});

}  // namespace matsparql
