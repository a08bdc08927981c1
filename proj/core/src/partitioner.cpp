#include "matsparql/partitioner.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <stdexcept>

#include "matsparql/light.hpp"

namespace matsparql {

namespace {

struct RootNeeds {
  bool rows = false;
  bool cols = false;
};

RootNeeds level0_needs(const QueryPlan& plan, std::size_t r) {
  RootNeeds needs;
  const auto& occ = plan.occurrences[plan.root_occurrence[r]];
  if (!occ.expanded()) return needs;
  for (const auto& ge : plan.groups[occ.group].edges) {
    (ge.cls == EdgeClass::consistent ? needs.rows : needs.cols) = true;
  }
  return needs;
}

bool csc_has(const LspmCsc* csc, std::size_t x) { return csc != nullptr && csc->has_col(x); }

std::vector<EntityId> sorted_union(const std::vector<std::vector<EntityId>>& sets) {
  std::set<EntityId> all;
  for (const auto& s : sets) all.insert(s.begin(), s.end());
  return {all.begin(), all.end()};
}

void rebuild_index(NodeAssignment& node, std::size_t n) {
  node.ir.assign(n, kAbsent);
  node.ic.assign(n, kAbsent);
  for (std::size_t k = 0; k < node.held_rows.size(); ++k) node.ir[node.held_rows[k]] = static_cast<std::uint32_t>(k);
  for (std::size_t k = 0; k < node.held_cols.size(); ++k) node.ic[node.held_cols[k]] = static_cast<std::uint32_t>(k);
}

Partition first_stage(const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan, const PartitionSpec& spec,
                      const LightResult* light) {
  if (spec.np == 0 || spec.nt == 0) throw std::invalid_argument("np and nt must be at least 1");
  if (csc != nullptr && csc->n != csr.n) throw std::invalid_argument("CSR/CSC dimension mismatch");

  Partition p;
  p.spec = spec;
  const std::size_t n = csr.n;
  const std::size_t roots = plan.roots.size();
  std::vector<RootNeeds> needs(roots);
  p.root_eligible.resize(roots);

  bool any_rows = false;
  bool any_cols = false;
  for (std::size_t r = 0; r < roots; ++r) {
    needs[r] = level0_needs(plan, r);
    any_rows |= needs[r].rows;
    any_cols |= needs[r].cols;
    const VertexId root = plan.roots[r];
    const bool bound = light != nullptr && light->constrains(root);
    auto eligible = [&](std::size_t x) {
      return (!needs[r].rows || csr.has_row(x)) && (!needs[r].cols || csc_has(csc, x));
    };
    auto& out = p.root_eligible[r];
    if (bound) {
      for (EntityId x : *light->vertex_bindings[root]) {
        if (eligible(x)) out.push_back(x);
      }
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        if (eligible(x)) out.push_back(static_cast<EntityId>(x));
      }
    }
    if (bound && out.empty()) p.empty_result = true;
  }
  if (light != nullptr && light->unsatisfiable) p.empty_result = true;

  // Constant-bound roots first, fewest bindings first; the rest in plan order.
  p.root_order.resize(roots);
  for (std::size_t r = 0; r < roots; ++r) p.root_order[r] = r;
  if (light != nullptr) {
    std::stable_sort(p.root_order.begin(), p.root_order.end(), [&](std::size_t a, std::size_t b) {
      const bool ba = light->constrains(plan.roots[a]);
      const bool bb = light->constrains(plan.roots[b]);
      if (ba != bb) return ba;
      if (ba) return p.root_eligible[a].size() < p.root_eligible[b].size();
      return false;
    });
  }

  std::vector<EntityId> universe;
  if (!p.empty_result) universe = sorted_union(p.root_eligible);
  std::vector<bool> in_universe(n, false);
  for (EntityId x : universe) in_universe[x] = true;
  for (std::size_t x = 0; x < n; ++x) {
    if (in_universe[x]) continue;
    if (any_rows && csr.has_row(x)) p.dropped_rows.push_back(static_cast<EntityId>(x));
    if (any_cols && csc_has(csc, x)) p.dropped_cols.push_back(static_cast<EntityId>(x));
  }

  // Per-root membership, for splitting blocks by root.
  std::vector<std::vector<bool>> member(roots, std::vector<bool>(n, false));
  for (std::size_t r = 0; r < roots; ++r) {
    for (EntityId x : p.root_eligible[r]) member[r][x] = true;
  }

  auto blocks = block_split(universe, spec.parts());
  p.nodes.resize(spec.np);
  for (std::size_t node = 0; node < spec.np; ++node) {
    auto& na = p.nodes[node];
    na.node_id = node;
    na.workers.resize(spec.nt);
    std::set<EntityId> rows;
    std::set<EntityId> cols;
    for (std::size_t t = 0; t < spec.nt; ++t) {
      auto& share = na.workers[t];
      share.indices = std::move(blocks[node * spec.nt + t]);
      share.per_root.resize(roots);
      for (EntityId x : share.indices) {
        bool row = false;
        bool col = false;
        for (std::size_t r = 0; r < roots; ++r) {
          if (!member[r][x]) continue;
          share.per_root[r].push_back(x);
          row |= needs[r].rows;
          col |= needs[r].cols;
        }
        if (row) share.rows.push_back(x);
        if (col) share.cols.push_back(x);
      }
      na.au.insert(na.au.end(), share.indices.begin(), share.indices.end());
      rows.insert(share.rows.begin(), share.rows.end());
      cols.insert(share.cols.begin(), share.cols.end());
    }
    na.held_rows.assign(rows.begin(), rows.end());
    na.held_cols.assign(cols.begin(), cols.end());
    na.extra_rows.assign(1, {});
    na.extra_cols.assign(1, {});
    rebuild_index(na, n);
  }
  return p;
}

}  // namespace

std::vector<std::vector<EntityId>> block_split(const std::vector<EntityId>& items, std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("parts must be at least 1");
  std::vector<std::vector<EntityId>> out(parts);
  const std::size_t base = items.size() / parts;
  const std::size_t extra = items.size() % parts;
  std::size_t k = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out[i].assign(items.begin() + static_cast<std::ptrdiff_t>(k), items.begin() + static_cast<std::ptrdiff_t>(k + len));
    k += len;
  }
  return out;
}

Partition partition_first_stage(const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan,
                                const PartitionSpec& spec) {
  return first_stage(csr, csc, plan, spec, nullptr);
}

void partition_next_stage(Partition& p, const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan) {
  const std::size_t n = csr.n;
  const std::size_t levels = std::max<std::size_t>(plan.l_max, 1);

  // Per root and level: expanded occurrences and the direction mix of the
  // edges that reach them / leave them.
  struct LevelInfo {
    bool reach_by_row = false;  // some parent edge consistent: child = column of parent's row
    bool reach_by_col = false;
    bool need_rows = false;     // level-l groups with consistent edges
    bool need_cols = false;
  };
  const std::size_t roots = plan.roots.size();
  std::vector<std::vector<LevelInfo>> info(roots, std::vector<LevelInfo>(levels));
  for (const auto& grp : plan.groups) {
    if (grp.level == 0) continue;
    auto& li = info[grp.root][grp.level];
    for (const auto& ge : grp.edges) (ge.cls == EdgeClass::consistent ? li.need_rows : li.need_cols) = true;
    for (EdgeId e : plan.occurrences[grp.occurrence].via) {
      (*plan.edge_class[e] == EdgeClass::consistent ? li.reach_by_row : li.reach_by_col) = true;
    }
  }

  for (auto& node : p.nodes) {
    node.extra_rows.assign(levels, {});
    node.extra_cols.assign(levels, {});
    std::vector<bool> held_row(n, false);
    std::vector<bool> held_col(n, false);
    for (EntityId x : node.held_rows) held_row[x] = true;
    for (EntityId x : node.held_cols) held_col[x] = true;
    std::vector<std::set<EntityId>> add_rows(levels);
    std::vector<std::set<EntityId>> add_cols(levels);

    for (std::size_t r = 0; r < roots; ++r) {
      if (plan.lr[r] <= 1) continue;
      const RootNeeds needs0 = level0_needs(plan, r);
      std::set<EntityId> frontier_rows;
      std::set<EntityId> frontier_cols;
      for (const auto& share : node.workers) {
        for (EntityId x : share.per_root[r]) {
          if (needs0.rows) frontier_rows.insert(x);
          if (needs0.cols) frontier_cols.insert(x);
        }
      }
      for (std::size_t l = 1; l < plan.lr[r]; ++l) {
        const auto& li = info[r][l];
        std::set<EntityId> candidates;
        if (li.reach_by_row) {
          for (EntityId x : frontier_rows) {
            auto cols = row_cols(csr, x);
            candidates.insert(cols.begin(), cols.end());
          }
        }
        if (li.reach_by_col && csc != nullptr) {
          for (EntityId x : frontier_cols) {
            if (!csc->has_col(x)) continue;
            const auto c = csc->mc[x];
            candidates.insert(csc->row.begin() + csc->pc[c], csc->row.begin() + csc->pc[c + 1]);
          }
        }
        frontier_rows.clear();
        frontier_cols.clear();
        for (EntityId x : candidates) {
          if (li.need_rows && csr.has_row(x)) {
            frontier_rows.insert(x);
            if (!held_row[x]) add_rows[l].insert(x);
          }
          if (li.need_cols && csc_has(csc, x)) {
            frontier_cols.insert(x);
            if (!held_col[x]) add_cols[l].insert(x);
          }
        }
      }
    }

    for (std::size_t l = 1; l < levels; ++l) {
      for (EntityId x : add_rows[l]) {
        if (held_row[x]) continue;
        held_row[x] = true;
        node.extra_rows[l].push_back(x);
        node.held_rows.push_back(x);
      }
      for (EntityId x : add_cols[l]) {
        if (held_col[x]) continue;
        held_col[x] = true;
        node.extra_cols[l].push_back(x);
        node.held_cols.push_back(x);
      }
    }
    rebuild_index(node, n);
  }
}

Partition partition_with_constants(const LightResult& light, const LspmCsr& csr, const LspmCsc* csc,
                                   const QueryPlan& plan, const PartitionSpec& spec) {
  Partition p = first_stage(csr, csc, plan, spec, &light);
  if (!p.empty_result) partition_next_stage(p, csr, csc, plan);
  return p;
}

Partition partition(const LspmCsr& csr, const LspmCsc* csc, const QueryPlan& plan, const PartitionSpec& spec,
                    const LightResult* light) {
  if (light != nullptr) return partition_with_constants(*light, csr, csc, plan, spec);
  Partition p = first_stage(csr, csc, plan, spec, nullptr);
  partition_next_stage(p, csr, csc, plan);
  return p;
}

}  // namespace matsparql
