#pragma once

// Query planning by depth-first traversal of the query graph. Each visited
// vertex evaluates all of its still-unevaluated edges as one group.

#include <optional>
#include <string_view>
#include <vector>

#include "matsparql/query.hpp"
#include "matsparql/types.hpp"

namespace matsparql {

enum class Traversal { direction, degree };

/// Consistent edges are evaluated along their arrow (on rows of the center),
/// opposite ones against it (on columns of the center).
enum class EdgeClass { consistent, opposite };

std::string_view to_string(Traversal t);
std::string_view to_string(EdgeClass c);
std::optional<Traversal> parse_traversal(std::string_view s);

struct GroupEdge {
  EdgeId edge = 0;
  EdgeClass cls = EdgeClass::consistent;
  VertexId other = 0;  // endpoint that is not the center (the center itself for a self-loop)
};

struct Group {
  VertexId center = 0;
  std::size_t root = 0;        // index into QueryPlan::roots
  std::size_t occurrence = 0;  // occurrence the group expands
  std::size_t level = 0;
  std::vector<GroupEdge> edges;  // ascending edge id
};

/// One appearance of a vertex in the traversal tree. A vertex reached by
/// several groups (a cycle) has several occurrences; at most one expands.
struct Occurrence {
  VertexId vertex = 0;
  std::size_t root = 0;
  std::size_t parent = kNone;
  std::size_t depth = 0;
  std::vector<EdgeId> via;      // parent-group edges reaching this occurrence
  std::size_t group = kNone;    // group evaluated here, if expanded
  std::vector<std::size_t> children;

  bool expanded() const { return group != kNone; }
};

struct QueryPlan {
  Traversal traversal = Traversal::degree;
  std::vector<VertexId> roots;
  std::vector<std::size_t> root_occurrence;
  std::vector<Group> groups;
  std::vector<Occurrence> occurrences;
  std::vector<EdgeId> light;  // constant-incident edges, evaluated before the traversal

  // Filled by compute_levels_paths.
  std::vector<std::size_t> edge_level;               // per edge; kNone for light edges
  std::vector<std::optional<EdgeClass>> edge_class;  // per edge; empty for light edges
  std::vector<std::size_t> edge_group;               // per edge; kNone for light edges
  std::vector<std::vector<std::vector<std::size_t>>> path_occurrences;  // per root
  std::vector<std::vector<std::vector<VertexId>>> paths;                // per root
  std::vector<std::size_t> lr;                                          // levels per root
  std::size_t l_max = 0;

  std::size_t child_slot(std::size_t occurrence, std::size_t child) const;
};

/// Follows edge directions only. Throws PlanError if `g` has constants.
QueryPlan plan_direction(const QueryGraph& g);

/// Ignores edge directions; with constants, constant-incident edges are
/// pre-evaluated and roots are taken from the constants' neighbours.
QueryPlan plan_degree(const QueryGraph& g);

QueryPlan plan_query(const QueryGraph& g, Traversal t);

/// Assigns edge levels and classes and records the root-to-leaf paths.
/// Paths of a root are ordered by length, then by vertex sequence.
void compute_levels_paths(QueryPlan& plan, const QueryGraph& g);

}  // namespace matsparql
