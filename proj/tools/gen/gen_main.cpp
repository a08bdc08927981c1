#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "matsparql/rdf.hpp"
#include "matsparql/workload.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic N-Triples generator", "matsparql-gen"};
  std::uint64_t seed = 1;
  std::string kind = "watdiv";
  std::size_t triples = 100000;
  std::size_t entities = 50;
  std::size_t predicates = 6;
  std::string out_path;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--kind", kind, "random | watdiv")->check(CLI::IsMember({"random", "watdiv"}));
  app.add_option("--triples", triples, "Approximate triple count");
  app.add_option("--entities", entities, "Entity count (random only)");
  app.add_option("--predicates", predicates, "Predicate count (random only)");
  app.add_option("--out", out_path, "Output file (default stdout)");
  CLI11_PARSE(app, argc, argv);

  std::vector<matsparql::RawTriple> data;
  if (kind == "watdiv") {
    data = matsparql::workload::watdiv_like(triples, seed);
  } else {
    matsparql::workload::Rng rng(seed);
    data = matsparql::workload::random_triples({entities, predicates, triples}, rng);
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return 1;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  for (const auto& t : data) {
    out << matsparql::display_term(t.subject) << ' ' << matsparql::display_term(t.predicate) << ' '
        << matsparql::display_term(t.object) << " .\n";
  }
  return 0;
}
