#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

#ifndef MATSPARQL_TEST_DATA_DIR
#error "MATSPARQL_TEST_DATA_DIR must be defined"
#endif

namespace matsparql::testing {

inline std::string data_path(const std::string& name) { return std::string(MATSPARQL_TEST_DATA_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> movies_order() {
  return {"User0", "User1", "Product0", "User2", "User3", "User4", "Product1", "Product2"};
}

inline QueryGraph crew_query() { return parse_query(read_text(data_path("crew.rq"))); }

/// Movie triples restricted to the predicates of `g`, encoded with the
/// entity order from movies.order.
inline Encoded movies_for(const QueryGraph& g) {
  const auto raw = parse_ntriples_file(data_path("movies.nt"));
  const auto filtered = filter_predicates(raw, g.predicates());
  const auto order = movies_order();
  return encode(filtered, order);
}

inline Encoded movies() { return movies_for(crew_query()); }

// follows=1, actor=2, director=3 under movies().
inline constexpr PredicateId kFollows = 1;
inline constexpr PredicateId kActor = 2;
inline constexpr PredicateId kDirector = 3;

}  // namespace matsparql::testing
