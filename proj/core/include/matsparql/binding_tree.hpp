#pragma once

// Per-path binding trees, local/global tree pruning and final enumeration.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matsparql/planner.hpp"
#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql {

struct LightResult;

struct TreeNode {
  EntityId value = 0;
  std::vector<TreeNode> children;  // ascending value

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Trees of one root binding, one per plan path of that root (same order as
/// QueryPlan::paths[root]). Every tree's top node holds `binding`.
struct RootGroup {
  EntityId binding = 0;
  std::vector<TreeNode> trees;

  friend bool operator==(const RootGroup&, const RootGroup&) = default;
};

/// All surviving root groups of one root, ascending binding.
using TreePool = std::vector<RootGroup>;

struct BindingTree {
  std::size_t root = 0;
  std::size_t path = 0;
  TreeNode top;

  friend bool operator==(const BindingTree&, const BindingTree&) = default;
};

std::vector<BindingTree> flatten(const TreePool& pool, std::size_t root);
std::size_t node_count(const TreeNode& t);
/// Serialized size: 8 bytes per node (value + child count).
std::size_t tree_bytes(const TreePool& pool);

enum class PostMode { none, local, global, local_then_global };

std::string_view to_string(PostMode m);

bool is_cyclic(const QueryGraph& g);
PostMode select_postprocessing(const QueryGraph& g, const QueryPlan& plan);

/// Variables of root `root` that local pruning reconciles: those appearing
/// in two or more paths or twice in one path (the root itself only when it
/// recurs below level 0).
std::vector<VertexId> local_common(const QueryPlan& plan, std::size_t root);

/// Variables shared by two or more roots.
std::vector<VertexId> global_common(const QueryPlan& plan);

/// Removes bindings of `omega` variables missing from any tree containing
/// the variable, cascading childless parents; repeats to a fixpoint. When
/// `light` is given, bindings of constant-adjacent variables outside their
/// light sets are removed as well. Returns the number of nodes removed.
std::size_t local_prune(TreePool& pool, const QueryPlan& plan, std::size_t root, const std::vector<VertexId>& omega,
                        const LightResult* light = nullptr);

/// Keeps only bindings of `phi` variables present under every root, then
/// runs local pruning on every pool. Empties all pools when one is empty.
std::size_t global_prune(std::vector<TreePool>& pools, const QueryPlan& plan, const std::vector<VertexId>& phi,
                         const LightResult* light = nullptr);

/// Applies `mode`. Returns the number of nodes removed.
std::size_t postprocess(std::vector<TreePool>& pools, const QueryGraph& g, const QueryPlan& plan, PostMode mode,
                        const LightResult* light = nullptr);

struct SolutionSet {
  std::vector<std::string> variables;        // projection names, no '?'
  std::vector<VertexId> columns;             // projection vertex ids
  std::vector<std::vector<EntityId>> rows;   // distinct, ascending

  friend bool operator==(const SolutionSet&, const SolutionSet&) = default;
};

/// Sorts and deduplicates rows.
void normalize(SolutionSet& s);

/// Joins the branches of every root group on shared variables, then joins
/// the roots and applies light-edge constraints. With `verify`, every
/// resulting mapping is re-checked against the triples.
SolutionSet enumerate_solutions(const std::vector<TreePool>& pools, const QueryGraph& g, const QueryPlan& plan,
                                const ResolvedQuery& rq, const LightResult* light, const TripleSet* verify = nullptr);

}  // namespace matsparql
