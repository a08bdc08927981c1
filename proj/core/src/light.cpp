#include "matsparql/light.hpp"

#include <algorithm>
#include <iterator>

namespace matsparql {

LightResult eval_light(const TripleSet& t, const QueryGraph& g, const ResolvedQuery& rq,
                       std::span<const EdgeId> light) {
  LightResult r;
  r.edge_pairs.assign(g.edges.size(), {});
  r.vertex_bindings.assign(g.vertices.size(), std::nullopt);

  for (EdgeId e : light) {
    const auto& edge = g.edges[e];
    const PredicateId p = rq.edge_predicate[e];
    const bool s_const = g.vertices[edge.from].constant;
    const bool o_const = g.vertices[edge.to].constant;
    const EntityId s_id = s_const ? rq.constant_entity[edge.from] : kAbsent;
    const EntityId o_id = o_const ? rq.constant_entity[edge.to] : kAbsent;
    const bool unresolved = p == 0 || (s_const && s_id == kAbsent) || (o_const && o_id == kAbsent);

    auto& pairs = r.edge_pairs[e];
    if (!unresolved) {
      for (const auto& tr : t.triples) {
        if (tr.val != p) continue;
        if (s_const && tr.row != s_id) continue;
        if (o_const && tr.col != o_id) continue;
        if (edge.self_loop() && tr.row != tr.col) continue;
        pairs.emplace_back(tr.row, tr.col);
      }
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
    if (pairs.empty()) r.unsatisfiable = true;

    auto restrict = [&](VertexId v, bool subject_side) {
      if (g.vertices[v].constant) return;
      std::vector<EntityId> vals;
      vals.reserve(pairs.size());
      for (const auto& [s, o] : pairs) vals.push_back(subject_side ? s : o);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      auto& slot = r.vertex_bindings[v];
      if (!slot) {
        slot = std::move(vals);
      } else {
        std::vector<EntityId> both;
        std::set_intersection(slot->begin(), slot->end(), vals.begin(), vals.end(), std::back_inserter(both));
        slot = std::move(both);
      }
    };
    restrict(edge.from, true);
    restrict(edge.to, false);
  }
  return r;
}

}  // namespace matsparql
