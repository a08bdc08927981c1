#include "matsparql/oracle.hpp"

#include <algorithm>
#include <unordered_map>

namespace matsparql {

namespace {

class Search {
 public:
  Search(const TripleSet& t, const QueryGraph& g, const ResolvedQuery& rq) : t_(t), g_(g), rq_(rq) {
    for (std::size_t i = 0; i < t.triples.size(); ++i) by_pred_[t.triples[i].val].push_back(i);
    order_.resize(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) order_[e] = e;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](EdgeId a, EdgeId b) { return selectivity(a) < selectivity(b); });
    value_.assign(g.vertices.size(), kAbsent);
    for (VertexId v = 0; v < g.vertices.size(); ++v) {
      if (g.vertices[v].constant) value_[v] = rq.constant_entity[v];
    }
  }

  void set_limit(std::size_t limit) { limit_ = limit; }
  std::size_t found() const { return found_; }

  void run(std::size_t k, SolutionSet* out) {
    if (found_ >= limit_) return;
    if (k == order_.size()) {
      ++found_;
      if (out == nullptr) return;
      std::vector<EntityId> row;
      row.reserve(g_.projection.size());
      for (VertexId v : g_.projection) row.push_back(value_[v]);
      out->rows.push_back(std::move(row));
      return;
    }
    const QueryEdge& e = g_.edges[order_[k]];
    const auto it = by_pred_.find(rq_.edge_predicate[order_[k]]);
    if (it == by_pred_.end()) return;
    for (std::size_t i : it->second) {
      const EncodedTriple& tr = t_.triples[i];
      const EntityId s0 = value_[e.from];
      const EntityId o0 = value_[e.to];
      if (s0 != kAbsent && s0 != tr.row) continue;
      if (o0 != kAbsent && o0 != tr.col) continue;
      if (e.from == e.to && tr.row != tr.col) continue;
      value_[e.from] = tr.row;
      value_[e.to] = tr.col;
      run(k + 1, out);
      value_[e.from] = s0;
      value_[e.to] = o0;
    }
  }

 private:
  std::size_t selectivity(EdgeId e) const {
    const auto it = by_pred_.find(rq_.edge_predicate[e]);
    std::size_t n = it == by_pred_.end() ? 0 : it->second.size();
    // patterns touching a constant first
    if (g_.vertices[g_.edges[e].from].constant || g_.vertices[g_.edges[e].to].constant) n /= 16;
    return n;
  }

  const TripleSet& t_;
  const QueryGraph& g_;
  const ResolvedQuery& rq_;
  std::unordered_map<PredicateId, std::vector<std::size_t>> by_pred_;
  std::vector<EdgeId> order_;
  std::vector<EntityId> value_;
  std::size_t limit_ = kNone;
  std::size_t found_ = 0;
};

}  // namespace

SolutionSet brute_force(const TripleSet& t, const QueryGraph& g, const ResolvedQuery& rq) {
  SolutionSet out;
  out.columns = g.projection;
  for (VertexId v : g.projection) out.variables.push_back(g.vertices[v].term);
  for (VertexId v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].constant && rq.constant_entity[v] == kAbsent) return out;
  }
  Search(t, g, rq).run(0, &out);
  normalize(out);
  return out;
}

SolutionSet brute_force(const Encoded& data, const QueryGraph& g) {
  return brute_force(data.triples, g, resolve(g, data.dictionary));
}

std::size_t count_mappings(const Encoded& data, const QueryGraph& g, std::size_t limit) {
  const auto rq = resolve(g, data.dictionary);
  for (VertexId v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].constant && rq.constant_entity[v] == kAbsent) return 0;
  }
  Search s(data.triples, g, rq);
  s.set_limit(limit);
  s.run(0, nullptr);
  return s.found();
}

}  // namespace matsparql
