#include "matsparql/planner.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace matsparql {

std::string_view to_string(Traversal t) { return t == Traversal::direction ? "direction" : "degree"; }

std::string_view to_string(EdgeClass c) { return c == EdgeClass::consistent ? "consistent" : "opposite"; }

std::optional<Traversal> parse_traversal(std::string_view s) {
  if (s == "direction") return Traversal::direction;
  if (s == "degree") return Traversal::degree;
  return std::nullopt;
}

std::size_t QueryPlan::child_slot(std::size_t occurrence, std::size_t child) const {
  const auto& ch = occurrences.at(occurrence).children;
  auto it = std::find(ch.begin(), ch.end(), child);
  if (it == ch.end()) throw std::out_of_range("not a child occurrence");
  return static_cast<std::size_t>(it - ch.begin());
}

namespace {

class Traverser {
 public:
  Traverser(const QueryGraph& g, Traversal mode) : g_(g), mode_(mode) {
    plan_.traversal = mode;
    visited_.assign(g.vertices.size(), false);
    evaluated_.assign(g.edges.size(), false);
  }

  QueryPlan run() {
    if (g_.has_constants()) {
      if (mode_ == Traversal::direction) {
        throw PlanError(
            "direction traversal cannot plan queries with constant vertices; use degree traversal");
      }
      for (VertexId v = 0; v < g_.vertices.size(); ++v) {
        if (g_.vertices[v].constant) visited_[v] = true;
      }
      for (EdgeId e : classify_edges(g_).light) {
        evaluated_[e] = true;
        plan_.light.push_back(e);
      }
    }

    while (std::find(evaluated_.begin(), evaluated_.end(), false) != evaluated_.end()) {
      const VertexId root = choose_root();
      const std::size_t r = plan_.roots.size();
      plan_.roots.push_back(root);
      visited_[root] = true;
      Occurrence occ;
      occ.vertex = root;
      occ.root = r;
      plan_.occurrences.push_back(occ);
      plan_.root_occurrence.push_back(plan_.occurrences.size() - 1);
      stack_.push_back(plan_.occurrences.size() - 1);

      while (!stack_.empty()) {
        const std::size_t o = stack_.back();
        stack_.pop_back();
        expand(o);
      }
    }
    compute_levels_paths(plan_, g_);
    return std::move(plan_);
  }

 private:
  std::size_t unevaluated_out(VertexId v) const {
    std::size_t n = 0;
    for (EdgeId e = 0; e < g_.edges.size(); ++e) {
      if (!evaluated_[e] && g_.edges[e].from == v) ++n;
    }
    return n;
  }

  std::size_t unevaluated_in(VertexId v) const {
    std::size_t n = 0;
    for (EdgeId e = 0; e < g_.edges.size(); ++e) {
      if (!evaluated_[e] && g_.edges[e].to == v && g_.edges[e].from != v) ++n;
    }
    return n;
  }

  std::size_t unevaluated_total(VertexId v) const {
    std::size_t n = 0;
    for (EdgeId e = 0; e < g_.edges.size(); ++e) {
      if (!evaluated_[e] && (g_.edges[e].from == v || g_.edges[e].to == v)) ++n;
    }
    return n;
  }

  bool adjacent_to_constant(VertexId v) const {
    for (const auto& e : g_.edges) {
      if (e.from == v && g_.vertices[e.to].constant) return true;
      if (e.to == v && g_.vertices[e.from].constant) return true;
    }
    return false;
  }

  // Best candidate by descending (primary, unevaluated out-edges), then
  // ascending vertex id.
  template <typename Primary>
  std::optional<VertexId> best(const std::vector<VertexId>& candidates, Primary primary) const {
    std::optional<VertexId> pick;
    std::tuple<std::size_t, std::size_t> best_key{};
    for (VertexId v : candidates) {
      auto key = std::make_tuple(primary(v), unevaluated_out(v));
      if (!pick || key > best_key) {
        pick = v;
        best_key = key;
      }
    }
    return pick;
  }

  VertexId choose_root() const {
    std::vector<VertexId> open;
    for (VertexId v = 0; v < g_.vertices.size(); ++v) {
      if (!visited_[v] && unevaluated_total(v) > 0) open.push_back(v);
    }
    if (open.empty()) throw std::logic_error("unevaluated edges left but no root candidate");

    if (mode_ == Traversal::direction) {
      std::vector<VertexId> sources;
      for (VertexId v : open) {
        if (unevaluated_in(v) == 0 && unevaluated_out(v) > 0) sources.push_back(v);
      }
      if (!sources.empty()) return *best(sources, [](VertexId) { return std::size_t{0}; });
      // cyclic: no source left
      std::vector<VertexId> with_out;
      for (VertexId v : open) {
        if (unevaluated_out(v) > 0) with_out.push_back(v);
      }
      return *best(with_out, [](VertexId) { return std::size_t{0}; });
    }

    auto by_degree = [this](VertexId v) { return unevaluated_total(v); };
    std::vector<VertexId> near_constants;
    for (VertexId v : open) {
      if (adjacent_to_constant(v)) near_constants.push_back(v);
    }
    if (!near_constants.empty()) return *best(near_constants, by_degree);
    return *best(open, by_degree);
  }

  void expand(std::size_t o) {
    const VertexId v = plan_.occurrences[o].vertex;
    Group group;
    group.center = v;
    group.root = plan_.occurrences[o].root;
    group.occurrence = o;
    group.level = plan_.occurrences[o].depth;
    for (EdgeId e = 0; e < g_.edges.size(); ++e) {
      if (evaluated_[e]) continue;
      const auto& edge = g_.edges[e];
      if (edge.from == v) {
        group.edges.push_back({e, EdgeClass::consistent, edge.to});
      } else if (edge.to == v && mode_ == Traversal::degree) {
        group.edges.push_back({e, EdgeClass::opposite, edge.from});
      }
    }
    if (group.edges.empty()) return;
    for (const auto& ge : group.edges) evaluated_[ge.edge] = true;

    const std::size_t gid = plan_.groups.size();
    plan_.occurrences[o].group = gid;

    std::vector<VertexId> others;
    for (const auto& ge : group.edges) {
      if (ge.other != v && std::find(others.begin(), others.end(), ge.other) == others.end()) {
        others.push_back(ge.other);
      }
    }
    std::vector<std::pair<VertexId, std::size_t>> pushed;
    for (VertexId w : others) {
      Occurrence child;
      child.vertex = w;
      child.root = group.root;
      child.parent = o;
      child.depth = plan_.occurrences[o].depth + 1;
      for (const auto& ge : group.edges) {
        if (ge.other == w) child.via.push_back(ge.edge);
      }
      plan_.occurrences.push_back(std::move(child));
      const std::size_t cid = plan_.occurrences.size() - 1;
      plan_.occurrences[o].children.push_back(cid);
      visited_[w] = true;
      pushed.emplace_back(w, cid);
    }
    plan_.groups.push_back(std::move(group));

    // Ascending push order, so the strongest candidate is popped first.
    auto key = [this](VertexId w) {
      if (mode_ == Traversal::direction) return std::make_tuple(std::size_t{0}, unevaluated_out(w), w);
      return std::make_tuple(unevaluated_total(w), unevaluated_out(w), w);
    };
    std::stable_sort(pushed.begin(), pushed.end(),
                     [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
    for (const auto& [w, cid] : pushed) stack_.push_back(cid);
  }

  const QueryGraph& g_;
  Traversal mode_;
  QueryPlan plan_;
  std::vector<bool> visited_;
  std::vector<bool> evaluated_;
  std::vector<std::size_t> stack_;
};

void collect_paths(const QueryPlan& plan, std::size_t o, std::vector<std::size_t>& prefix,
                   std::vector<std::vector<std::size_t>>& out) {
  prefix.push_back(o);
  const auto& occ = plan.occurrences[o];
  if (occ.children.empty()) {
    out.push_back(prefix);
  } else {
    for (std::size_t c : occ.children) collect_paths(plan, c, prefix, out);
  }
  prefix.pop_back();
}

}  // namespace

QueryPlan plan_direction(const QueryGraph& g) { return Traverser(g, Traversal::direction).run(); }

QueryPlan plan_degree(const QueryGraph& g) { return Traverser(g, Traversal::degree).run(); }

QueryPlan plan_query(const QueryGraph& g, Traversal t) {
  return t == Traversal::direction ? plan_direction(g) : plan_degree(g);
}

void compute_levels_paths(QueryPlan& plan, const QueryGraph& g) {
  plan.edge_level.assign(g.edges.size(), kNone);
  plan.edge_class.assign(g.edges.size(), std::nullopt);
  plan.edge_group.assign(g.edges.size(), kNone);
  plan.lr.assign(plan.roots.size(), 0);
  for (std::size_t gid = 0; gid < plan.groups.size(); ++gid) {
    auto& grp = plan.groups[gid];
    grp.level = plan.occurrences[grp.occurrence].depth;
    for (const auto& ge : grp.edges) {
      plan.edge_level[ge.edge] = grp.level;
      plan.edge_class[ge.edge] = ge.cls;
      plan.edge_group[ge.edge] = gid;
    }
    plan.lr[grp.root] = std::max(plan.lr[grp.root], grp.level + 1);
  }
  plan.l_max = plan.lr.empty() ? 0 : *std::max_element(plan.lr.begin(), plan.lr.end());

  plan.path_occurrences.assign(plan.roots.size(), {});
  plan.paths.assign(plan.roots.size(), {});
  for (std::size_t r = 0; r < plan.roots.size(); ++r) {
    std::vector<std::size_t> prefix;
    auto& occ_paths = plan.path_occurrences[r];
    collect_paths(plan, plan.root_occurrence[r], prefix, occ_paths);
    auto vertices_of = [&](const std::vector<std::size_t>& p) {
      std::vector<VertexId> vs;
      for (std::size_t o : p) vs.push_back(plan.occurrences[o].vertex);
      return vs;
    };
    std::stable_sort(occ_paths.begin(), occ_paths.end(), [&](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return vertices_of(a) < vertices_of(b);
    });
    for (const auto& p : occ_paths) plan.paths[r].push_back(vertices_of(p));
  }
}

}  // namespace matsparql
