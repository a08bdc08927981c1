#pragma once

// Reference evaluator: backtracking nested-loop join over the triple list.

#include "matsparql/binding_tree.hpp"
#include "matsparql/query.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql {

SolutionSet brute_force(const TripleSet& t, const QueryGraph& g, const ResolvedQuery& rq);

/// Resolves `g` against `dict` first.
SolutionSet brute_force(const Encoded& data, const QueryGraph& g);

/// Number of full variable mappings (before projection), counting stops at `limit`.
std::size_t count_mappings(const Encoded& data, const QueryGraph& g, std::size_t limit = kNone);

}  // namespace matsparql
