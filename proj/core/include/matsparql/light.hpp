#pragma once

// Evaluation of light edges (edges touching a constant vertex) directly on
// the coordinate-form matrix, before partitioning.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql {

struct LightResult {
  /// Per query edge: matching (subject, object) pairs. Empty for heavy edges.
  std::vector<std::vector<std::pair<EntityId, EntityId>>> edge_pairs;
  /// Per vertex: ascending bindings of a variable adjacent to constants,
  /// intersected over all of its light edges. nullopt otherwise.
  std::vector<std::optional<std::vector<EntityId>>> vertex_bindings;
  /// Some light edge matched nothing, so the query has no answer.
  bool unsatisfiable = false;

  bool constrains(VertexId v) const { return v < vertex_bindings.size() && vertex_bindings[v].has_value(); }
  std::size_t binding_count(VertexId v) const { return constrains(v) ? vertex_bindings[v]->size() : 0; }
};

LightResult eval_light(const TripleSet& t, const QueryGraph& g, const ResolvedQuery& rq,
                       std::span<const EdgeId> light);

}  // namespace matsparql
