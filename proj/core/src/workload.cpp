#include "matsparql/workload.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace matsparql::workload {

namespace {

// Skewed pick in [0, n): min of two uniform draws.
std::size_t skewed(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  return std::min(d(rng), d(rng));
}

std::size_t uniform(std::size_t n, Rng& rng) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(double p, Rng& rng) { return std::bernoulli_distribution(p)(rng); }

struct Topology {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (from, to), tree edges first
  std::size_t tree_edges = 0;
};

void link(Topology& t, std::size_t a, std::size_t b, Rng& rng) {
  if (coin(0.5, rng)) std::swap(a, b);
  t.edges.emplace_back(a, b);
}

Topology make_topology(const RandomQuerySpec& spec, Rng& rng) {
  Topology t;
  const std::size_t m = std::max<std::size_t>(spec.edges, 1);
  t.vertices = 1;
  auto grow = [&](std::size_t parent) {
    const std::size_t v = t.vertices++;
    link(t, parent, v, rng);
    return v;
  };
  switch (spec.shape) {
    case Shape::linear: {
      std::size_t last = 0;
      for (std::size_t i = 0; i < m; ++i) last = grow(last);
      break;
    }
    case Shape::star:
      for (std::size_t i = 0; i < m; ++i) grow(0);
      break;
    case Shape::snowflake: {
      std::vector<std::size_t> arms;
      const std::size_t n_arms = std::max<std::size_t>(1, std::min<std::size_t>(3, (m + 1) / 2));
      for (std::size_t i = 0; i < n_arms && t.edges.size() < m; ++i) arms.push_back(grow(0));
      for (std::size_t i = 0; t.edges.size() < m; ++i) grow(arms[i % arms.size()]);
      break;
    }
    case Shape::complex:
      for (std::size_t i = 0; i < m; ++i) {
        if (t.vertices >= 3 && coin(0.3, rng)) {
          const std::size_t a = uniform(t.vertices, rng);
          std::size_t b = uniform(t.vertices, rng);
          if (a == b) b = (b + 1) % t.vertices;
          link(t, a, b, rng);
        } else {
          grow(uniform(t.vertices, rng));
        }
      }
      break;
  }
  t.tree_edges = t.edges.size();
  if (spec.cycle && t.vertices >= 2) {
    std::size_t a = uniform(t.vertices, rng);
    std::size_t b = uniform(t.vertices, rng);
    if (t.vertices >= 3) {
      while (b == a) b = uniform(t.vertices, rng);
    }
    link(t, a, b, rng);
  }
  return t;
}

std::string var_name(std::size_t v) { return "v" + std::to_string(v); }

}  // namespace

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::linear: return "linear";
    case Shape::star: return "star";
    case Shape::snowflake: return "snowflake";
    case Shape::complex: return "complex";
  }
  return "linear";
}

std::vector<RawTriple> random_triples(const RandomDataSpec& spec, Rng& rng) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::vector<RawTriple> out;
  const std::size_t target = std::min(spec.triples, spec.entities * spec.entities * spec.predicates);
  while (out.size() < target) {
    const std::size_t s = skewed(spec.entities, rng);
    const std::size_t o = coin(0.7, rng) ? skewed(spec.entities, rng) : uniform(spec.entities, rng);
    const std::size_t p = skewed(spec.predicates, rng);
    if (!seen.emplace(s, o, p).second) continue;
    out.push_back({"e" + std::to_string(s), "p" + std::to_string(p), "e" + std::to_string(o)});
  }
  return out;
}

QueryGraph random_query(const Encoded& data, const RandomQuerySpec& spec, Rng& rng) {
  const Topology topo = make_topology(spec, rng);
  const auto& triples = data.triples.triples;
  const std::size_t n_pred = std::max<std::size_t>(1, data.dictionary.predicate_count());

  std::vector<EntityId> value(topo.vertices, kAbsent);
  std::vector<PredicateId> pred(topo.edges.size(), 0);

  if (spec.grounded && !triples.empty()) {
    std::map<EntityId, std::vector<std::size_t>> out_of;
    std::map<EntityId, std::vector<std::size_t>> into;
    for (std::size_t i = 0; i < triples.size(); ++i) {
      out_of[triples[i].row].push_back(i);
      into[triples[i].col].push_back(i);
    }
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::fill(value.begin(), value.end(), kAbsent);
      const auto& seed = triples[uniform(triples.size(), rng)];
      const auto [a0, b0] = topo.edges[0];
      value[a0] = seed.row;
      value[b0] = seed.col;
      pred[0] = seed.val;
      bool ok = true;
      for (std::size_t e = 1; e < topo.tree_edges && ok; ++e) {
        const auto [a, b] = topo.edges[e];
        if (value[a] != kAbsent && value[b] != kAbsent) {
          std::vector<PredicateId> cands;
          if (auto it = out_of.find(value[a]); it != out_of.end()) {
            for (std::size_t i : it->second) {
              if (triples[i].col == value[b]) cands.push_back(triples[i].val);
            }
          }
          if (cands.empty()) {
            ok = false;
            break;
          }
          pred[e] = cands[uniform(cands.size(), rng)];
          continue;
        }
        const bool forward = value[a] != kAbsent;
        const auto& index = forward ? out_of : into;
        const auto it = index.find(forward ? value[a] : value[b]);
        if (it == index.end()) {
          ok = false;
          break;
        }
        const auto& tr = triples[it->second[uniform(it->second.size(), rng)]];
        value[forward ? b : a] = forward ? tr.col : tr.row;
        pred[e] = tr.val;
      }
      if (!ok) continue;
      for (std::size_t e = topo.tree_edges; e < topo.edges.size(); ++e) {
        const auto [a, b] = topo.edges[e];
        std::vector<PredicateId> cands;
        for (std::size_t i : out_of[value[a]]) {
          if (triples[i].col == value[b]) cands.push_back(triples[i].val);
        }
        pred[e] = cands.empty() ? static_cast<PredicateId>(1 + uniform(n_pred, rng)) : cands[uniform(cands.size(), rng)];
      }
      break;
    }
  }
  for (auto& p : pred) {
    if (p == 0) p = static_cast<PredicateId>(1 + uniform(n_pred, rng));
  }

  std::vector<bool> constant(topo.vertices, false);
  const std::size_t n_const = std::min(spec.constants, topo.vertices - 1);
  for (std::size_t k = 0; k < n_const;) {
    const std::size_t v = uniform(topo.vertices, rng);
    if (constant[v]) continue;
    constant[v] = true;
    if (value[v] == kAbsent && data.dictionary.entity_count() > 0) {
      value[v] = static_cast<EntityId>(uniform(data.dictionary.entity_count(), rng));
    }
    ++k;
  }

  QueryGraph g;
  for (std::size_t v = 0; v < topo.vertices; ++v) {
    if (constant[v] && value[v] != kAbsent) {
      g.vertices.push_back({data.dictionary.entity(value[v]), true});
    } else {
      g.vertices.push_back({var_name(v), false});
    }
  }
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    const std::string p = pred[e] <= data.dictionary.predicate_count() ? data.dictionary.predicate(pred[e]) : "p0";
    g.edges.push_back({topo.edges[e].first, topo.edges[e].second, p});
  }
  g.projection = g.variables();
  // Round-trip so vertex numbering follows first appearance in the text.
  return parse_query(print_query(g));
}

std::vector<RawTriple> watdiv_like(std::size_t triples, std::uint64_t seed) {
  Rng rng(seed);
  // Scale entity pools with the requested size.
  const std::size_t unit = std::max<std::size_t>(triples / 100, 10);
  const std::size_t users = unit * 4;
  const std::size_t products = unit * 2;
  const std::size_t reviews = unit * 2;
  const std::size_t retailers = std::max<std::size_t>(unit / 20, 3);
  const std::size_t cities = std::max<std::size_t>(unit / 10, 5);
  const std::size_t countries = 12;
  const std::size_t genres = 20;
  const std::size_t topics = 40;

  auto name = [](const char* kind, std::size_t i) { return std::string(kind) + std::to_string(i); };
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<RawTriple> out;
  auto emit = [&](std::string s, const char* p, std::string o) {
    std::string pred = std::string("http://example.org/wsdbm/") + p;
    if (seen.emplace(s, pred, o).second) out.push_back({std::move(s), std::move(pred), std::move(o)});
  };
  // Relations drawn round-robin with fixed weights until the target is met.
  const std::vector<std::pair<int, int>> weights = {{0, 20}, {1, 12}, {2, 10}, {3, 8}, {4, 8}, {5, 8}, {6, 6},
                                                    {7, 6},  {8, 5},  {9, 5},  {10, 4}, {11, 4}, {12, 4}};
  std::vector<int> bag;
  for (auto [k, w] : weights) bag.insert(bag.end(), static_cast<std::size_t>(w), k);
  while (out.size() < triples) {
    switch (bag[uniform(bag.size(), rng)]) {
      case 0: emit(name("User", skewed(users, rng)), "follows", name("User", skewed(users, rng))); break;
      case 1: emit(name("User", uniform(users, rng)), "friendOf", name("User", uniform(users, rng))); break;
      case 2: emit(name("User", uniform(users, rng)), "likes", name("Product", skewed(products, rng))); break;
      case 3: emit(name("User", uniform(users, rng)), "purchased", name("Product", skewed(products, rng))); break;
      case 4: {
        const std::size_t r = uniform(reviews, rng);
        emit(name("Review", r), "reviewOf", name("Product", skewed(products, rng)));
        emit(name("Review", r), "reviewer", name("User", uniform(users, rng)));
        break;
      }
      case 5: emit(name("Product", uniform(products, rng)), "hasGenre", name("Genre", skewed(genres, rng))); break;
      case 6: emit(name("User", uniform(users, rng)), "livesIn", name("City", skewed(cities, rng))); break;
      case 7: emit(name("City", uniform(cities, rng)), "locatedIn", name("Country", skewed(countries, rng))); break;
      case 8: emit(name("Retailer", uniform(retailers, rng)), "offers", name("Product", uniform(products, rng))); break;
      case 9: emit(name("Product", uniform(products, rng)), "hasTopic", name("Topic", skewed(topics, rng))); break;
      case 10: emit(name("User", uniform(users, rng)), "subscribes", name("Topic", skewed(topics, rng))); break;
      case 11: emit(name("Retailer", uniform(retailers, rng)), "basedIn", name("City", uniform(cities, rng))); break;
      case 12: emit(name("Product", uniform(products, rng)), "madeIn", name("Country", skewed(countries, rng))); break;
    }
  }
  out.resize(triples);
  return out;
}

}  // namespace matsparql::workload
