#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "matsparql/rdf.hpp"
#include "matsparql/types.hpp"

namespace matsparql {

struct QueryVertex {
  std::string term;  // variable name without '?', or canonical constant term
  bool constant = false;

  friend bool operator==(const QueryVertex&, const QueryVertex&) = default;
};

struct QueryEdge {
  VertexId from = 0;
  VertexId to = 0;
  std::string predicate;  // canonical term

  bool self_loop() const { return from == to; }
  friend bool operator==(const QueryEdge&, const QueryEdge&) = default;
};

/// A basic graph pattern as a directed, edge-labelled graph. Vertices are
/// numbered in order of first appearance in the pattern.
struct QueryGraph {
  std::vector<QueryVertex> vertices;
  std::vector<QueryEdge> edges;
  std::vector<VertexId> projection;

  std::optional<VertexId> find_variable(std::string_view name) const;
  bool has_constants() const;
  std::vector<VertexId> variables() const;
  std::unordered_set<std::string> predicates() const;
  /// Vertex ids other than `v` adjacent to it (either direction), ascending.
  std::vector<VertexId> neighbours(VertexId v) const;

  friend bool operator==(const QueryGraph&, const QueryGraph&) = default;
};

/// Parses `[PREFIX p: <iri>]* SELECT [DISTINCT] (?v+ | *) [WHERE] { s p o . ... }`.
/// Throws ParseError (with line/column) or UnsupportedFeature.
QueryGraph parse_query(std::string_view text);

/// Renders `g` back to query text accepted by parse_query.
std::string print_query(const QueryGraph& g);

struct EdgeClasses {
  std::vector<EdgeId> light;  // touches at least one constant
  std::vector<EdgeId> heavy;  // variables only
};

EdgeClasses classify_edges(const QueryGraph& g);

/// Query terms mapped onto the dictionary of a loaded dataset. Unknown
/// predicates resolve to 0 and unknown constants to kAbsent; both simply
/// match nothing.
struct ResolvedQuery {
  std::vector<PredicateId> edge_predicate;  // per edge
  std::vector<EntityId> constant_entity;    // per vertex, kAbsent for variables
};

ResolvedQuery resolve(const QueryGraph& g, const Dictionary& dict);

}  // namespace matsparql
