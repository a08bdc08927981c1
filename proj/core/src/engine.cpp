#include "matsparql/engine.hpp"

#include <chrono>

namespace matsparql {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Traversal resolve_traversal(const std::optional<Traversal>& t) { return t.value_or(Traversal::degree); }

std::pair<PredicateSet, PredicateSet> keep_sets(const QueryGraph& g, const QueryPlan& plan, const ResolvedQuery& rq) {
  PredicateSet rows;
  PredicateSet cols;
  for (EdgeId e = 0; e < g.edges.size(); ++e) {
    const PredicateId p = rq.edge_predicate[e];
    if (p == 0) continue;
    if (plan.edge_class[e]) {
      (*plan.edge_class[e] == EdgeClass::consistent ? rows : cols).insert(p);
    } else if (g.vertices[g.edges[e].from].constant) {
      rows.insert(p);
    } else {
      cols.insert(p);
    }
  }
  return {rows, cols};
}

QueryResult run_query(const Encoded& data, const QueryGraph& g, const EngineOptions& opts) {
  QueryResult res;
  res.plan = plan_query(g, resolve_traversal(opts.traversal));
  res.resolved = resolve(g, data.dictionary);
  const QueryPlan& plan = res.plan;

  auto t0 = Clock::now();
  res.light = eval_light(data.triples, g, res.resolved, plan.light);
  res.stats.light_ms = ms_since(t0);

  t0 = Clock::now();
  const auto [rows, cols] = keep_sets(g, plan, res.resolved);
  res.csr = build_csr(data.triples, rows);
  if (!cols.empty()) res.csc = build_csc(data.triples, cols);
  res.stats.lspm_ms = ms_since(t0);
  const LspmCsc* csc = res.csc ? &*res.csc : nullptr;
  const LightResult* light = plan.light.empty() ? nullptr : &res.light;

  t0 = Clock::now();
  res.partition = partition(res.csr, csc, plan, opts.spec, light);
  res.stats.partition_ms = ms_since(t0);

  ExecContext ctx{&res.csr, csc, &plan, res.resolved.edge_predicate, light, &res.partition};
  res.run = run_all(ctx, opts.exec);
  const ExecStats& rs = res.run.stats;
  res.stats.add_counts(rs);
  res.stats.transfer_in_ms = rs.transfer_in_ms;
  res.stats.eval_ms = rs.eval_ms;
  res.stats.transfer_out_ms = rs.transfer_out_ms;
  res.stats.bytes_in = rs.bytes_in;
  res.stats.bytes_out = rs.bytes_out;

  t0 = Clock::now();
  res.pools = res.run.pools;
  res.post = select_postprocessing(g, plan);
  res.pruned_nodes = postprocess(res.pools, g, plan, res.post, light);
  res.solutions = enumerate_solutions(res.pools, g, plan, res.resolved, light, opts.verify ? &data.triples : nullptr);
  res.stats.post_ms = ms_since(t0);
  return res;
}

}  // namespace matsparql
