#pragma once

// Multi-stage partitioning of the LSpM matrices over np nodes x nt workers.
//
// First stage: the indices a root may bind at level 0 are split into
// np*nt contiguous blocks. A root whose level-0 group has consistent edges
// needs the row, one with opposite edges needs the column, a mixed root
// needs both (so only indices present on both sides are eligible).
//
// Next stage: for every level l >= 1 each node additionally receives the
// rows/columns that the bindings produced at level l-1 can reach.

#include <cstdint>
#include <optional>
#include <vector>

#include "matsparql/lspm.hpp"
#include "matsparql/planner.hpp"

namespace matsparql {

struct LightResult;

struct PartitionSpec {
  std::size_t np = 1;
  std::size_t nt = 1;

  std::size_t parts() const { return np * nt; }
};

struct WorkerShare {
  std::vector<EntityId> indices;                 // first-stage block, ascending
  std::vector<EntityId> rows;                    // block indices held as rows
  std::vector<EntityId> cols;                    // block indices held as columns
  std::vector<std::vector<EntityId>> per_root;   // block indices each root starts from
};

struct NodeAssignment {
  std::size_t node_id = 0;
  std::vector<WorkerShare> workers;
  std::vector<EntityId> au;                        // first-stage indices of the node, slot order
  std::vector<std::vector<EntityId>> extra_rows;   // by level; [0] is always empty
  std::vector<std::vector<EntityId>> extra_cols;
  std::vector<EntityId> held_rows;                 // local row ordinal -> original row
  std::vector<EntityId> held_cols;
  std::vector<std::uint32_t> ir;                   // original row -> local ordinal, kAbsent if not held
  std::vector<std::uint32_t> ic;

  bool holds_row(std::size_t orig) const { return ir[orig] != kAbsent; }
  bool holds_col(std::size_t orig) const { return ic[orig] != kAbsent; }
};

struct Partition {
  PartitionSpec spec;
  std::vector<NodeAssignment> nodes;
  std::vector<std::vector<EntityId>> root_eligible;  // per root, ascending
  std::vector<std::size_t> root_order;               // roots in processing order
  std::vector<EntityId> dropped_rows;                // non-empty rows no root may start from
  std::vector<EntityId> dropped_cols;
  bool empty_result = false;                         // a constant-bound root has no bindings

  std::size_t worker_count() const { return spec.parts(); }
};

/// Contiguous split of `items` into `parts` blocks; the first
/// (size % parts) blocks get one extra element.
std::vector<std::vector<EntityId>> block_split(const std::vector<EntityId>& items, std::size_t parts);

/// First-stage partitioning only (no next-stage rows).
Partition partition_first_stage(const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan,
                                const PartitionSpec& spec);

/// Adds next-stage rows/columns for levels 1..L-1 and rebuilds ir/ic.
void partition_next_stage(Partition& p, const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan);

/// Constants variant: roots adjacent to constants start only from their
/// light bindings; the root with the fewest bindings is processed first.
Partition partition_with_constants(const LightResult& light, const LspmCsr& csr, const LspmCsc* csc,
                                   const QueryPlan& plan, const PartitionSpec& spec);

/// Full partitioning (both stages), with or without light results.
Partition partition(const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan, const PartitionSpec& spec,
                    const LightResult* light = nullptr);

}  // namespace matsparql
