#pragma once

// Seeded generators for test and benchmark workloads.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql::workload {

using Rng = std::mt19937_64;

struct RandomDataSpec {
  std::size_t entities = 50;
  std::size_t predicates = 6;
  std::size_t triples = 300;
};

/// Entities `e<k>`, predicates `p<k>`; subjects and objects skewed towards
/// low ids so that joins hit.
std::vector<RawTriple> random_triples(const RandomDataSpec& spec, Rng& rng);

enum class Shape { linear, star, snowflake, complex };

std::string_view to_string(Shape s);

struct RandomQuerySpec {
  Shape shape = Shape::linear;
  std::size_t edges = 3;
  std::size_t constants = 0;  // vertices turned into constants (at least one variable is kept)
  bool cycle = false;         // add an edge closing a cycle
  bool grounded = true;       // draw predicates from an actual match in the data
};

/// Builds a query of the requested shape over the vocabulary of `data`.
/// Grounded queries have at least one solution unless a closing edge could
/// not be matched.
QueryGraph random_query(const Encoded& data, const RandomQuerySpec& spec, Rng& rng);

/// WatDiv-flavoured social/e-commerce graph with about `triples` triples.
std::vector<RawTriple> watdiv_like(std::size_t triples, std::uint64_t seed);

}  // namespace matsparql::workload
