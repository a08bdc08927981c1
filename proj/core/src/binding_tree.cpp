#include "matsparql/binding_tree.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "matsparql/light.hpp"

namespace matsparql {

namespace {

bool contains(const std::vector<VertexId>& vs, VertexId v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

void collect_values(const TreeNode& t, std::size_t depth, const std::vector<VertexId>& path, VertexId v,
                    std::set<EntityId>& out) {
  if (path[depth] == v) out.insert(t.value);
  for (const auto& c : t.children) collect_values(c, depth + 1, path, v, out);
}

// Drops nodes of `v` whose value is not allowed, then childless internal
// nodes. Returns false when `t` itself goes.
bool filter_tree(TreeNode& t, std::size_t depth, const std::vector<VertexId>& path, VertexId v,
                 const std::set<EntityId>& allowed, std::size_t& removed) {
  if (path[depth] == v && !allowed.contains(t.value)) {
    removed += node_count(t);
    return false;
  }
  if (depth + 1 < path.size()) {
    std::erase_if(t.children, [&](TreeNode& c) { return !filter_tree(c, depth + 1, path, v, allowed, removed); });
    if (t.children.empty()) {
      ++removed;
      return false;
    }
  }
  return true;
}

// Restricts `v` to `allowed` in every tree of `group`. False if the group dies.
bool restrict_group(RootGroup& group, const QueryPlan& plan, std::size_t root, VertexId v,
                    const std::set<EntityId>& allowed, std::size_t& removed) {
  const auto& paths = plan.paths[root];
  for (std::size_t i = 0; i < group.trees.size(); ++i) {
    if (!contains(paths[i], v)) continue;
    if (!filter_tree(group.trees[i], 0, paths[i], v, allowed, removed)) return false;
  }
  return true;
}

std::size_t drop_group(const RootGroup& g) {
  std::size_t n = 0;
  for (const auto& t : g.trees) n += node_count(t);
  return n;
}

void clear_all(std::vector<TreePool>& pools, std::size_t& removed) {
  for (auto& pool : pools) {
    for (const auto& g : pool) removed += drop_group(g);
    pool.clear();
  }
}

using Row = std::vector<EntityId>;

struct VecHash {
  std::size_t operator()(const Row& r) const {
    std::size_t h = 1469598103934665603ULL;
    for (EntityId x : r) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

std::vector<Row> hash_join(const std::vector<Row>& a, const std::vector<Row>& b, const std::vector<VertexId>& on,
                           const std::vector<VertexId>& b_vars) {
  std::vector<Row> out;
  if (a.empty() || b.empty()) return out;
  auto key = [&](const Row& r) {
    Row k;
    k.reserve(on.size());
    for (VertexId v : on) k.push_back(r[v]);
    return k;
  };
  std::unordered_map<Row, std::vector<std::size_t>, VecHash> index;
  for (std::size_t i = 0; i < b.size(); ++i) index[key(b[i])].push_back(i);
  for (const Row& ra : a) {
    auto it = index.find(key(ra));
    if (it == index.end()) continue;
    for (std::size_t i : it->second) {
      Row m = ra;
      for (VertexId v : b_vars) m[v] = b[i][v];
      out.push_back(std::move(m));
    }
  }
  return out;
}

void branches(const TreeNode& t, std::size_t depth, const std::vector<VertexId>& path, Row& cur,
              std::vector<Row>& out) {
  const VertexId v = path[depth];
  const EntityId prev = cur[v];
  if (prev != kAbsent && prev != t.value) return;
  cur[v] = t.value;
  if (depth + 1 == path.size()) {
    out.push_back(cur);
  } else {
    for (const auto& c : t.children) branches(c, depth + 1, path, cur, out);
  }
  cur[v] = prev;
}

std::vector<VertexId> distinct(const std::vector<VertexId>& path) {
  std::vector<VertexId> vs = path;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::vector<VertexId> intersect(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<VertexId> unite(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<BindingTree> flatten(const TreePool& pool, std::size_t root) {
  std::vector<BindingTree> out;
  for (const auto& g : pool) {
    for (std::size_t i = 0; i < g.trees.size(); ++i) out.push_back({root, i, g.trees[i]});
  }
  return out;
}

std::size_t node_count(const TreeNode& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

std::size_t tree_bytes(const TreePool& pool) { return 8 * std::accumulate(pool.begin(), pool.end(), std::size_t{0},
                                                                          [](std::size_t s, const RootGroup& g) {
                                                                            return s + drop_group(g);
                                                                          }); }

std::string_view to_string(PostMode m) {
  switch (m) {
    case PostMode::none: return "none";
    case PostMode::local: return "local";
    case PostMode::global: return "global";
    case PostMode::local_then_global: return "local_then_global";
  }
  return "none";
}

bool is_cyclic(const QueryGraph& g) {
  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    const auto a = find(e.from);
    const auto b = find(e.to);
    if (a == b) return true;
    parent[a] = b;
  }
  return false;
}

PostMode select_postprocessing(const QueryGraph& g, const QueryPlan& plan) {
  const bool cyclic = is_cyclic(g);
  const auto constants = static_cast<std::size_t>(
      std::count_if(g.vertices.begin(), g.vertices.end(), [](const QueryVertex& v) { return v.constant; }));
  if (plan.roots.empty()) return PostMode::none;
  const bool local = cyclic || constants >= 2;
  if (plan.roots.size() == 1) return local ? PostMode::local : PostMode::none;
  if (constants == 0) return cyclic ? PostMode::local_then_global : PostMode::global;
  if (global_common(plan).empty()) return local ? PostMode::local : PostMode::none;
  return local ? PostMode::local_then_global : PostMode::global;
}

std::vector<VertexId> local_common(const QueryPlan& plan, std::size_t root) {
  std::set<VertexId> out;
  const VertexId r = plan.roots[root];
  std::unordered_map<VertexId, std::size_t> count;
  for (const auto& path : plan.paths[root]) {
    std::unordered_map<VertexId, std::size_t> here;
    for (std::size_t k = 1; k < path.size(); ++k) ++here[path[k]];
    for (const auto& [v, c] : here) {
      if (c >= 2 || v == r) out.insert(v);
      ++count[v];
    }
  }
  for (const auto& [v, c] : count) {
    if (c >= 2) out.insert(v);
  }
  return {out.begin(), out.end()};
}

std::vector<VertexId> global_common(const QueryPlan& plan) {
  std::unordered_map<VertexId, std::size_t> roots_with;
  for (std::size_t r = 0; r < plan.roots.size(); ++r) {
    std::set<VertexId> vs;
    for (const auto& path : plan.paths[r]) vs.insert(path.begin(), path.end());
    for (VertexId v : vs) ++roots_with[v];
  }
  std::vector<VertexId> out;
  for (const auto& [v, c] : roots_with) {
    if (c >= 2) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t local_prune(TreePool& pool, const QueryPlan& plan, std::size_t root, const std::vector<VertexId>& omega,
                        const LightResult* light) {
  std::vector<VertexId> targets = omega;
  if (light != nullptr) {
    for (const auto& path : plan.paths[root]) {
      for (VertexId v : path) {
        if (light->constrains(v) && !contains(targets, v)) targets.push_back(v);
      }
    }
  }
  if (targets.empty()) return 0;

  std::size_t removed = 0;
  const auto& paths = plan.paths[root];
  std::erase_if(pool, [&](RootGroup& group) {
    for (bool changed = true; changed;) {
      changed = false;
      for (VertexId v : targets) {
        std::optional<std::set<EntityId>> common;
        for (std::size_t i = 0; i < group.trees.size(); ++i) {
          if (!contains(paths[i], v)) continue;
          std::set<EntityId> vals;
          collect_values(group.trees[i], 0, paths[i], v, vals);
          if (!common) {
            common = std::move(vals);
          } else {
            std::erase_if(*common, [&](EntityId x) { return !vals.contains(x); });
          }
        }
        if (!common) continue;
        if (light != nullptr && light->constrains(v)) {
          const auto& allowed = *light->vertex_bindings[v];
          std::erase_if(*common, [&](EntityId x) { return !std::binary_search(allowed.begin(), allowed.end(), x); });
        }
        const std::size_t before = removed;
        if (!restrict_group(group, plan, root, v, *common, removed)) {
          removed += drop_group(group);
          return true;
        }
        changed |= removed != before;
      }
    }
    return false;
  });
  return removed;
}

std::size_t global_prune(std::vector<TreePool>& pools, const QueryPlan& plan, const std::vector<VertexId>& phi,
                         const LightResult* light) {
  std::size_t removed = 0;
  auto any_empty = [&] { return std::any_of(pools.begin(), pools.end(), [](const TreePool& p) { return p.empty(); }); };
  if (any_empty()) {
    clear_all(pools, removed);
    return removed;
  }
  for (bool changed = true; changed;) {
    const std::size_t start = removed;
    for (VertexId v : phi) {
      std::optional<std::set<EntityId>> common;
      for (std::size_t r = 0; r < pools.size(); ++r) {
        std::set<EntityId> vals;
        bool has = false;
        for (std::size_t i = 0; i < plan.paths[r].size(); ++i) {
          if (!contains(plan.paths[r][i], v)) continue;
          has = true;
          for (const auto& g : pools[r]) collect_values(g.trees[i], 0, plan.paths[r][i], v, vals);
        }
        if (!has) continue;
        if (!common) {
          common = std::move(vals);
        } else {
          std::erase_if(*common, [&](EntityId x) { return !vals.contains(x); });
        }
      }
      if (!common) continue;
      for (std::size_t r = 0; r < pools.size(); ++r) {
        std::erase_if(pools[r], [&](RootGroup& g) {
          if (restrict_group(g, plan, r, v, *common, removed)) return false;
          removed += drop_group(g);
          return true;
        });
      }
    }
    for (std::size_t r = 0; r < pools.size(); ++r) removed += local_prune(pools[r], plan, r, local_common(plan, r), light);
    if (any_empty()) {
      clear_all(pools, removed);
      break;
    }
    changed = removed != start;
  }
  return removed;
}

std::size_t postprocess(std::vector<TreePool>& pools, const QueryGraph& g, const QueryPlan& plan, PostMode mode,
                        const LightResult* light) {
  (void)g;
  std::size_t removed = 0;
  if (mode == PostMode::local || mode == PostMode::local_then_global) {
    for (std::size_t r = 0; r < pools.size(); ++r) removed += local_prune(pools[r], plan, r, local_common(plan, r), light);
  }
  if (mode == PostMode::global || mode == PostMode::local_then_global) {
    removed += global_prune(pools, plan, global_common(plan), light);
  }
  return removed;
}

void normalize(SolutionSet& s) {
  std::sort(s.rows.begin(), s.rows.end());
  s.rows.erase(std::unique(s.rows.begin(), s.rows.end()), s.rows.end());
}

SolutionSet enumerate_solutions(const std::vector<TreePool>& pools, const QueryGraph& g, const QueryPlan& plan,
                                const ResolvedQuery& rq, const LightResult* light, const TripleSet* verify) {
  SolutionSet out;
  out.columns = g.projection;
  for (VertexId v : g.projection) out.variables.push_back(g.vertices[v].term);
  if (light != nullptr && light->unsatisfiable) return out;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].constant && rq.constant_entity[v] == kAbsent) return out;
  }

  const std::size_t nv = g.vertices.size();
  std::vector<Row> acc{Row(nv, kAbsent)};
  std::vector<VertexId> acc_vars;

  for (std::size_t r = 0; r < plan.roots.size(); ++r) {
    const auto& paths = plan.paths[r];
    std::vector<Row> root_rows;
    std::vector<VertexId> root_vars;
    for (const auto& path : paths) root_vars = unite(root_vars, distinct(path));
    for (const auto& group : pools[r]) {
      std::vector<Row> rows;
      std::vector<VertexId> vars;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        std::vector<Row> br;
        Row cur(nv, kAbsent);
        branches(group.trees[i], 0, paths[i], cur, br);
        const auto pv = distinct(paths[i]);
        if (i == 0) {
          rows = std::move(br);
        } else {
          rows = hash_join(rows, br, intersect(vars, pv), pv);
        }
        vars = unite(vars, pv);
        if (rows.empty()) break;
      }
      root_rows.insert(root_rows.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    acc = hash_join(acc, root_rows, intersect(acc_vars, root_vars), root_vars);
    acc_vars = unite(acc_vars, root_vars);
    if (acc.empty()) return out;
  }

  for (VertexId v = 0; v < nv; ++v) {
    if (g.vertices[v].constant || std::binary_search(acc_vars.begin(), acc_vars.end(), v)) continue;
    if (light == nullptr || !light->constrains(v)) continue;
    std::vector<Row> next;
    for (const Row& row : acc) {
      for (EntityId x : *light->vertex_bindings[v]) {
        Row m = row;
        m[v] = x;
        next.push_back(std::move(m));
      }
    }
    acc = std::move(next);
    acc_vars = unite(acc_vars, {v});
  }
  if (light != nullptr) {
    std::erase_if(acc, [&](const Row& row) {
      for (VertexId v = 0; v < nv; ++v) {
        if (!light->constrains(v)) continue;
        const auto& allowed = *light->vertex_bindings[v];
        if (!std::binary_search(allowed.begin(), allowed.end(), row[v])) return true;
      }
      return false;
    });
  }

  if (verify != nullptr) {
    std::set<std::tuple<EntityId, EntityId, PredicateId>> exact;
    for (const auto& t : verify->triples) exact.emplace(t.row, t.col, t.val);
    std::erase_if(acc, [&](const Row& row) {
      auto value = [&](VertexId v) { return g.vertices[v].constant ? rq.constant_entity[v] : row[v]; };
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!exact.contains({value(g.edges[e].from), value(g.edges[e].to), rq.edge_predicate[e]})) return true;
      }
      return false;
    });
  }

  for (const Row& row : acc) {
    std::vector<EntityId> projected;
    projected.reserve(g.projection.size());
    for (VertexId v : g.projection) projected.push_back(row[v]);
    out.rows.push_back(std::move(projected));
  }
  normalize(out);
  return out;
}

}  // namespace matsparql
