#pragma once

// Per-worker evaluation over node-local copies of the assigned rows and
// columns: grouped incident-edge evaluation with pre-pruning, producing
// binding trees.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "matsparql/binding_tree.hpp"
#include "matsparql/light.hpp"
#include "matsparql/lspm.hpp"
#include "matsparql/partitioner.hpp"
#include "matsparql/planner.hpp"

namespace matsparql {

struct ExecOptions {
  bool pre_pruning = true;
  bool strict = false;       // throw SufficiencyError on an out-of-assignment access
  std::size_t threads = 0;   // 0: one per worker, capped by hardware concurrency
};

struct ExecStats {
  double light_ms = 0;
  double lspm_ms = 0;
  double partition_ms = 0;
  double transfer_in_ms = 0;
  double eval_ms = 0;
  double transfer_out_ms = 0;
  double post_ms = 0;
  std::size_t bytes_in = 0;
  std::size_t bytes_out = 0;
  std::size_t rows_scanned = 0;
  std::size_t cols_scanned = 0;
  std::size_t bindings = 0;
  std::size_t trees_formed = 0;
  std::size_t trees_deleted = 0;
  std::size_t misses = 0;

  void add_counts(const ExecStats& o);
};

/// Rows and columns of one node copied out of the shared matrices.
struct NodeStore {
  const NodeAssignment* node = nullptr;
  std::vector<std::uint32_t> rp;   // held row ordinal -> offset
  std::vector<EntityId> rcol;
  std::vector<PredicateId> rval;
  std::vector<std::uint32_t> cp;
  std::vector<EntityId> crow;
  std::vector<PredicateId> cval;

  std::size_t byte_size() const;
};

NodeStore build_node_store(const LspmCsr& csr, const LspmCsc* csc, const NodeAssignment& node);

/// Matches of one heavy group edge: other-endpoint values, ascending.
struct EdgeMatches {
  EdgeId edge = 0;
  std::vector<EntityId> others;
};

/// Everything a worker reads: global matrices (for the elimination maps and
/// for fallback on a miss) plus its node store.
struct WorkerView {
  const LspmCsr* csr = nullptr;
  const LspmCsc* csc = nullptr;
  const NodeStore* store = nullptr;  // null: read the global matrices directly
  bool strict = false;
};

/// Evaluates `group` with its center bound to `center`. Returns nullopt as
/// soon as (with pre-pruning) or after (without) some edge has no match.
/// Self-loops match only `center` itself.
std::optional<std::vector<EdgeMatches>> eval_vertex_group(const WorkerView& view, const Group& group,
                                                          std::span<const PredicateId> edge_predicate,
                                                          EntityId center, bool pre_pruning, ExecStats& stats);

struct WorkerOutput {
  std::size_t node = 0;
  std::size_t worker = 0;
  std::vector<TreePool> pools;  // per root
  ExecStats stats;
};

struct ExecContext {
  const LspmCsr* csr = nullptr;
  const LspmCsc* csc = nullptr;
  const QueryPlan* plan = nullptr;
  std::span<const PredicateId> edge_predicate;
  const LightResult* light = nullptr;
  const Partition* partition = nullptr;
};

WorkerOutput run_worker(const ExecContext& ctx, const NodeStore* store, std::size_t node, std::size_t worker,
                        const ExecOptions& opts);

struct RunOutput {
  std::vector<WorkerOutput> workers;  // (node, worker) order
  std::vector<TreePool> pools;        // merged per root
  ExecStats stats;
};

/// Builds node stores, runs every worker share concurrently and merges the
/// outputs deterministically.
RunOutput run_all(const ExecContext& ctx, const ExecOptions& opts);

}  // namespace matsparql
