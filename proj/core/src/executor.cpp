#include "matsparql/executor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iterator>
#include <stdexcept>
#include <thread>

namespace matsparql {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Slice {
  const EntityId* idx = nullptr;
  const PredicateId* val = nullptr;
  std::size_t len = 0;
};

Slice row_access(const WorkerView& v, EntityId x, ExecStats& stats) {
  ++stats.rows_scanned;
  const LspmCsr& csr = *v.csr;
  if (!csr.has_row(x)) return {};
  if (v.store != nullptr) {
    const std::uint32_t k = v.store->node->ir[x];
    if (k != kAbsent) {
      const auto b = v.store->rp[k];
      return {v.store->rcol.data() + b, v.store->rval.data() + b, v.store->rp[k + 1] - b};
    }
    ++stats.misses;
    if (v.strict) throw SufficiencyError("row " + std::to_string(x) + " not held by node");
  }
  const auto c = csr.mr[x];
  const auto b = csr.pr[c];
  return {csr.col.data() + b, csr.val.data() + b, csr.pr[c + 1] - b};
}

Slice col_access(const WorkerView& v, EntityId x, ExecStats& stats) {
  ++stats.cols_scanned;
  if (v.csc == nullptr) throw std::logic_error("opposite edge evaluated without a CSC");
  const LspmCsc& csc = *v.csc;
  if (!csc.has_col(x)) return {};
  if (v.store != nullptr) {
    const std::uint32_t k = v.store->node->ic[x];
    if (k != kAbsent) {
      const auto b = v.store->cp[k];
      return {v.store->crow.data() + b, v.store->cval.data() + b, v.store->cp[k + 1] - b};
    }
    ++stats.misses;
    if (v.strict) throw SufficiencyError("column " + std::to_string(x) + " not held by node");
  }
  const auto c = csc.mc[x];
  const auto b = csc.pc[c];
  return {csc.row.data() + b, csc.val.data() + b, csc.pc[c + 1] - b};
}

struct Bound {
  EntityId value = 0;
  std::vector<std::vector<Bound>> slots;  // per child occurrence
};

class Worker {
 public:
  Worker(const ExecContext& ctx, const WorkerView& view, const ExecOptions& opts, ExecStats& stats)
      : ctx_(ctx), plan_(*ctx.plan), view_(view), opts_(opts), stats_(stats) {}

  std::optional<Bound> evaluate(std::size_t o, EntityId x) {
    const Occurrence& occ = plan_.occurrences[o];
    if (!occ.expanded()) return Bound{x, {}};
    const Group& grp = plan_.groups[occ.group];
    const std::size_t formed_before = stats_.trees_formed;

    auto matches = eval_vertex_group(view_, grp, ctx_.edge_predicate, x, opts_.pre_pruning, stats_);
    if (!matches) return std::nullopt;

    std::vector<std::vector<EntityId>> candidates(occ.children.size());
    bool ok = true;
    for (std::size_t s = 0; s < occ.children.size() && (ok || !opts_.pre_pruning); ++s) {
      const Occurrence& ch = plan_.occurrences[occ.children[s]];
      candidates[s] = slot_values(grp, *matches, ch);
      if (candidates[s].empty()) ok = false;
    }
    if (ok) {
      for (std::size_t s = 0; s < occ.children.size(); ++s) {
        if (!plan_.occurrences[occ.children[s]].expanded()) ++stats_.trees_formed;
      }
    }

    Bound out{x, std::vector<std::vector<Bound>>(occ.children.size())};
    for (std::size_t s = 0; s < occ.children.size() && (ok || !opts_.pre_pruning); ++s) {
      for (EntityId y : candidates[s]) {
        if (auto sub = evaluate(occ.children[s], y)) out.slots[s].push_back(std::move(*sub));
      }
      if (out.slots[s].empty()) ok = false;
    }
    if (!ok) {
      stats_.trees_deleted += stats_.trees_formed - formed_before;
      return std::nullopt;
    }
    return out;
  }

 private:
  std::vector<EntityId> slot_values(const Group& grp, const std::vector<EdgeMatches>& matches,
                                    const Occurrence& ch) const {
    std::vector<EntityId> vals;
    bool first = true;
    for (EdgeId e : ch.via) {
      const auto it = std::find_if(grp.edges.begin(), grp.edges.end(), [e](const GroupEdge& ge) { return ge.edge == e; });
      const auto& others = matches[static_cast<std::size_t>(it - grp.edges.begin())].others;
      if (first) {
        vals = others;
        first = false;
      } else {
        std::vector<EntityId> both;
        std::set_intersection(vals.begin(), vals.end(), others.begin(), others.end(), std::back_inserter(both));
        vals = std::move(both);
      }
    }
    if (ctx_.light != nullptr && ctx_.light->constrains(ch.vertex)) {
      const auto& allowed = *ctx_.light->vertex_bindings[ch.vertex];
      std::erase_if(vals, [&](EntityId y) { return !std::binary_search(allowed.begin(), allowed.end(), y); });
    }
    return vals;
  }

  const ExecContext& ctx_;
  const QueryPlan& plan_;
  const WorkerView& view_;
  const ExecOptions& opts_;
  ExecStats& stats_;
};

TreeNode to_tree(const QueryPlan& plan, const Bound& b, const std::vector<std::size_t>& occs, std::size_t k) {
  TreeNode t{b.value, {}};
  if (k + 1 < occs.size()) {
    const std::size_t slot = plan.child_slot(occs[k], occs[k + 1]);
    t.children.reserve(b.slots[slot].size());
    for (const Bound& c : b.slots[slot]) t.children.push_back(to_tree(plan, c, occs, k + 1));
  }
  return t;
}

}  // namespace

void ExecStats::add_counts(const ExecStats& o) {
  rows_scanned += o.rows_scanned;
  cols_scanned += o.cols_scanned;
  bindings += o.bindings;
  trees_formed += o.trees_formed;
  trees_deleted += o.trees_deleted;
  misses += o.misses;
}

std::size_t NodeStore::byte_size() const {
  std::size_t b = 4 * (rp.size() + rcol.size() + rval.size() + cp.size() + crow.size() + cval.size());
  if (node != nullptr) {
    b += 4 * (node->au.size() + node->held_rows.size() + node->held_cols.size() + node->ir.size() + node->ic.size());
  }
  return b;
}

NodeStore build_node_store(const LspmCsr& csr, const LspmCsc* csc, const NodeAssignment& node) {
  NodeStore s;
  s.node = &node;
  s.rp.reserve(node.held_rows.size() + 1);
  s.rp.push_back(0);
  for (EntityId x : node.held_rows) {
    if (csr.has_row(x)) {
      const auto c = csr.mr[x];
      s.rcol.insert(s.rcol.end(), csr.col.begin() + csr.pr[c], csr.col.begin() + csr.pr[c + 1]);
      s.rval.insert(s.rval.end(), csr.val.begin() + csr.pr[c], csr.val.begin() + csr.pr[c + 1]);
    }
    s.rp.push_back(static_cast<std::uint32_t>(s.rcol.size()));
  }
  s.cp.reserve(node.held_cols.size() + 1);
  s.cp.push_back(0);
  for (EntityId x : node.held_cols) {
    if (csc != nullptr && csc->has_col(x)) {
      const auto c = csc->mc[x];
      s.crow.insert(s.crow.end(), csc->row.begin() + csc->pc[c], csc->row.begin() + csc->pc[c + 1]);
      s.cval.insert(s.cval.end(), csc->val.begin() + csc->pc[c], csc->val.begin() + csc->pc[c + 1]);
    }
    s.cp.push_back(static_cast<std::uint32_t>(s.crow.size()));
  }
  return s;
}

std::optional<std::vector<EdgeMatches>> eval_vertex_group(const WorkerView& view, const Group& group,
                                                          std::span<const PredicateId> edge_predicate,
                                                          EntityId center, bool pre_pruning, ExecStats& stats) {
  std::vector<EdgeMatches> out(group.edges.size());
  bool has_out = false;
  bool has_in = false;
  for (std::size_t k = 0; k < group.edges.size(); ++k) {
    out[k].edge = group.edges[k].edge;
    (group.edges[k].cls == EdgeClass::consistent ? has_out : has_in) = true;
  }

  auto scan = [&](Slice s, EdgeClass cls) {
    for (std::size_t i = 0; i < s.len; ++i) {
      for (std::size_t k = 0; k < group.edges.size(); ++k) {
        const GroupEdge& ge = group.edges[k];
        if (ge.cls != cls || edge_predicate[ge.edge] != s.val[i]) continue;
        if (ge.other == group.center && s.idx[i] != center) continue;
        out[k].others.push_back(s.idx[i]);
        ++stats.bindings;
      }
    }
  };
  auto side_ok = [&](EdgeClass cls) {
    for (std::size_t k = 0; k < group.edges.size(); ++k) {
      if (group.edges[k].cls == cls && out[k].others.empty()) return false;
    }
    return true;
  };

  bool ok = true;
  if (has_out) {
    scan(row_access(view, center, stats), EdgeClass::consistent);
    ok = side_ok(EdgeClass::consistent);
    if (!ok && pre_pruning) return std::nullopt;
  }
  if (has_in) {
    scan(col_access(view, center, stats), EdgeClass::opposite);
    ok = side_ok(EdgeClass::opposite) && ok;
  }
  if (!ok) return std::nullopt;
  return out;
}

WorkerOutput run_worker(const ExecContext& ctx, const NodeStore* store, std::size_t node, std::size_t worker,
                        const ExecOptions& opts) {
  const QueryPlan& plan = *ctx.plan;
  const WorkerShare& share = ctx.partition->nodes.at(node).workers.at(worker);
  WorkerOutput out;
  out.node = node;
  out.worker = worker;
  out.pools.resize(plan.roots.size());

  WorkerView view{ctx.csr, ctx.csc, store, opts.strict};
  Worker w(ctx, view, opts, out.stats);
  for (std::size_t r : ctx.partition->root_order) {
    const auto& occ_paths = plan.path_occurrences[r];
    for (EntityId x : share.per_root[r]) {
      auto b = w.evaluate(plan.root_occurrence[r], x);
      if (!b) continue;
      RootGroup g{x, {}};
      g.trees.reserve(occ_paths.size());
      for (const auto& occs : occ_paths) g.trees.push_back(to_tree(plan, *b, occs, 0));
      out.pools[r].push_back(std::move(g));
    }
  }
  return out;
}

RunOutput run_all(const ExecContext& ctx, const ExecOptions& opts) {
  RunOutput out;
  const Partition& p = *ctx.partition;
  const QueryPlan& plan = *ctx.plan;
  out.pools.resize(plan.roots.size());
  if (p.empty_result) return out;

  auto t0 = Clock::now();
  std::vector<NodeStore> stores;
  stores.reserve(p.nodes.size());
  for (const auto& node : p.nodes) {
    stores.push_back(build_node_store(*ctx.csr, ctx.csc, node));
    out.stats.bytes_in += stores.back().byte_size();
  }
  out.stats.transfer_in_ms = ms_since(t0);

  t0 = Clock::now();
  const std::size_t tasks = p.worker_count();
  out.workers.resize(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      const std::size_t node = i / p.spec.nt;
      const std::size_t worker = i % p.spec.nt;
      try {
        out.workers[i] = run_worker(ctx, &stores[node], node, worker, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = opts.threads;
  if (threads == 0) threads = std::max<std::size_t>(1, std::min<std::size_t>(tasks, std::thread::hardware_concurrency()));
  threads = std::min(threads, tasks);
  if (threads <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  out.stats.eval_ms = ms_since(t0);

  t0 = Clock::now();
  for (auto& w : out.workers) {
    out.stats.add_counts(w.stats);
    for (std::size_t r = 0; r < w.pools.size(); ++r) {
      out.stats.bytes_out += tree_bytes(w.pools[r]);
      for (const auto& g : w.pools[r]) out.pools[r].push_back(g);
    }
  }
  for (auto& pool : out.pools) {
    std::stable_sort(pool.begin(), pool.end(), [](const RootGroup& a, const RootGroup& b) { return a.binding < b.binding; });
  }
  out.stats.transfer_out_ms = ms_since(t0);
  return out;
}

}  // namespace matsparql
