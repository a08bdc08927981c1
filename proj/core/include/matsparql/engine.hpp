#pragma once

// End-to-end query pipeline: plan, light edges, LSpM, partition, parallel
// evaluation, post-processing and enumeration.

#include <optional>

#include "matsparql/binding_tree.hpp"
#include "matsparql/executor.hpp"
#include "matsparql/light.hpp"
#include "matsparql/lspm.hpp"
#include "matsparql/partitioner.hpp"
#include "matsparql/planner.hpp"
#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql {

struct EngineOptions {
  std::optional<Traversal> traversal;  // nullopt: auto (degree)
  PartitionSpec spec;
  ExecOptions exec;
  bool verify = false;  // re-check every solution against the triples
};

struct QueryResult {
  QueryPlan plan;
  ResolvedQuery resolved;
  LightResult light;
  LspmCsr csr;
  std::optional<LspmCsc> csc;
  Partition partition;
  RunOutput run;                  // per-worker outputs and merged pools before post-processing
  std::vector<TreePool> pools;    // after post-processing
  PostMode post = PostMode::none;
  std::size_t pruned_nodes = 0;
  SolutionSet solutions;
  ExecStats stats;
};

Traversal resolve_traversal(const std::optional<Traversal>& t);

/// Predicates the CSR (first) and CSC (second) must keep for `plan`.
std::pair<PredicateSet, PredicateSet> keep_sets(const QueryGraph& g, const QueryPlan& plan, const ResolvedQuery& rq);

QueryResult run_query(const Encoded& data, const QueryGraph& g, const EngineOptions& opts = {});

}  // namespace matsparql
