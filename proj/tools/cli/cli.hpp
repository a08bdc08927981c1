#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "matsparql/binding_tree.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql::cli {

/// Runs one command line (without the program name). Returns the exit status.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void write_csv(std::ostream& out, const SolutionSet& s, const Dictionary& dict);
void write_json(std::ostream& out, const SolutionSet& s, const Dictionary& dict);

}  // namespace matsparql::cli
