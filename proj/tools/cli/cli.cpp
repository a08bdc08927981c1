#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "cache.hpp"
#include "matsparql/engine.hpp"
#include "matsparql/oracle.hpp"

namespace matsparql::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Options {
  std::string data;
  std::string query_text;
  std::vector<std::string> query_files;
  std::string traversal = "auto";
  std::size_t np = 1;
  std::size_t nt = 1;
  std::string format = "csv";
  bool stats = false;
  bool dump_trees = false;
  bool dump_graph = false;
  bool no_prepruning = false;
  bool verify = false;
  std::string out_path;
  std::string cache;
  std::string entity_order;
  std::string configs = "1x1,2x2,2x4";
  std::size_t repeat = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(canonical_term(line));
  }
  return lines;
}

std::vector<std::pair<std::string, std::string>> queries_of(const Options& o) {
  std::vector<std::pair<std::string, std::string>> qs;
  if (!o.query_text.empty()) qs.emplace_back("inline", o.query_text);
  for (const auto& f : o.query_files) qs.emplace_back(f, read_file(f));
  if (qs.empty()) throw UsageError("a query is required (--query or --query-file)");
  return qs;
}

std::optional<Traversal> traversal_of(const Options& o) {
  if (o.traversal == "auto") return std::nullopt;
  auto t = parse_traversal(o.traversal);
  if (!t) throw UsageError("--traversal must be direction, degree or auto");
  return t;
}

struct LoadTimings {
  double read_ms = 0;
  double encode_ms = 0;
  bool from_cache = false;
};

Encoded load_dataset(const Options& o, const std::vector<QueryGraph>& queries, std::ostream& err,
                     LoadTimings& timings) {
  std::vector<std::string> filter;
  std::unordered_set<std::string> preds;
  for (const auto& g : queries) {
    for (const auto& p : g.predicates()) preds.insert(p);
  }
  filter.assign(preds.begin(), preds.end());
  const std::vector<std::string> order = o.entity_order.empty() ? std::vector<std::string>{} : read_lines(o.entity_order);

  std::optional<CacheKey> key;
  if (!o.cache.empty()) {
    key = key_for(o.data, filter, order);
    const auto t0 = Clock::now();
    if (auto cached = read_cache(o.cache, *key)) {
      timings.read_ms = ms_since(t0);
      timings.from_cache = true;
      return std::move(*cached);
    }
    if (std::ifstream(o.cache).good()) err << "note: cache " << o.cache << " is stale or unreadable; rebuilding\n";
  }

  auto t0 = Clock::now();
  auto raw = parse_ntriples_file(o.data);
  if (!queries.empty()) raw = filter_predicates(raw, preds);
  timings.read_ms = ms_since(t0);
  t0 = Clock::now();
  Encoded e = encode(raw, order);
  timings.encode_ms = ms_since(t0);
  if (key) write_cache(o.cache, *key, e);
  return e;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string name_of(const QueryGraph& g, VertexId v) {
  return g.vertices[v].constant ? display_term(g.vertices[v].term) : "?" + g.vertices[v].term;
}

json plan_json(const QueryGraph& g, const QueryPlan& p, bool with_graph) {
  json j;
  j["traversal"] = std::string(to_string(p.traversal));
  json roots = json::array();
  for (VertexId r : p.roots) roots.push_back(name_of(g, r));
  j["roots"] = roots;
  json light = json::array();
  for (EdgeId e : p.light) light.push_back(e);
  j["light_edges"] = light;
  json groups = json::array();
  for (const auto& grp : p.groups) {
    json edges = json::array();
    for (const auto& ge : grp.edges) {
      edges.push_back({{"edge", ge.edge},
                       {"class", std::string(to_string(ge.cls))},
                       {"predicate", display_term(g.edges[ge.edge].predicate)},
                       {"other", name_of(g, ge.other)}});
    }
    groups.push_back({{"center", name_of(g, grp.center)}, {"root", grp.root}, {"level", grp.level}, {"edges", edges}});
  }
  j["groups"] = groups;
  json paths = json::array();
  for (std::size_t r = 0; r < p.roots.size(); ++r) {
    json rp = json::array();
    for (const auto& path : p.paths[r]) {
      json pv = json::array();
      for (VertexId v : path) pv.push_back(name_of(g, v));
      rp.push_back(pv);
    }
    paths.push_back({{"root", name_of(g, p.roots[r])}, {"levels", p.lr[r]}, {"paths", rp}});
  }
  j["roots_detail"] = paths;
  j["levels"] = p.l_max;
  j["post_processing"] = std::string(to_string(select_postprocessing(g, p)));
  if (with_graph) {
    json vs = json::array();
    for (const auto& v : g.vertices) vs.push_back({{"term", v.constant ? display_term(v.term) : "?" + v.term}, {"constant", v.constant}});
    json es = json::array();
    for (const auto& e : g.edges) es.push_back({{"from", e.from}, {"to", e.to}, {"predicate", display_term(e.predicate)}});
    j["graph"] = {{"vertices", vs}, {"edges", es}};
  }
  return j;
}

json ids_json(const std::vector<EntityId>& ids) {
  json a = json::array();
  for (EntityId x : ids) a.push_back(x);
  return a;
}

json index_json(const std::vector<std::uint32_t>& idx) {
  json a = json::array();
  for (auto x : idx) {
    if (x == kAbsent) {
      a.push_back(nullptr);
    } else {
      a.push_back(x);
    }
  }
  return a;
}

json partition_json(const Partition& p) {
  json j;
  j["np"] = p.spec.np;
  j["nt"] = p.spec.nt;
  j["empty_result"] = p.empty_result;
  j["root_order"] = p.root_order;
  j["dropped_rows"] = ids_json(p.dropped_rows);
  j["dropped_cols"] = ids_json(p.dropped_cols);
  json nodes = json::array();
  for (const auto& n : p.nodes) {
    json workers = json::array();
    for (std::size_t t = 0; t < n.workers.size(); ++t) {
      const auto& w = n.workers[t];
      workers.push_back({{"worker", t}, {"indices", ids_json(w.indices)}, {"rows", ids_json(w.rows)}, {"cols", ids_json(w.cols)}});
    }
    json er = json::array();
    json ec = json::array();
    for (const auto& l : n.extra_rows) er.push_back(ids_json(l));
    for (const auto& l : n.extra_cols) ec.push_back(ids_json(l));
    nodes.push_back({{"node", n.node_id},
                     {"au", ids_json(n.au)},
                     {"workers", workers},
                     {"extra_rows", er},
                     {"extra_cols", ec},
                     {"held_rows", ids_json(n.held_rows)},
                     {"held_cols", ids_json(n.held_cols)},
                     {"ir", index_json(n.ir)},
                     {"ic", index_json(n.ic)}});
  }
  j["nodes"] = nodes;
  return j;
}

void dump_tree(std::ostream& err, const TreeNode& t, const Dictionary& dict, std::size_t depth) {
  err << std::string(2 * depth + 2, ' ') << display_term(dict.entity(t.value)) << '\n';
  for (const auto& c : t.children) dump_tree(err, c, dict, depth + 1);
}

void dump_trees(std::ostream& err, const QueryGraph& g, const QueryPlan& p, const std::vector<TreePool>& pools,
                const Dictionary& dict) {
  for (std::size_t r = 0; r < pools.size(); ++r) {
    for (const auto& bt : flatten(pools[r], r)) {
      err << "tree root=" << name_of(g, p.roots[r]) << " path=";
      for (std::size_t k = 0; k < p.paths[r][bt.path].size(); ++k) {
        err << (k ? "," : "") << name_of(g, p.paths[r][bt.path][k]);
      }
      err << '\n';
      dump_tree(err, bt.top, dict, 0);
    }
  }
}

void write_stats(std::ostream& err, const QueryResult& r) {
  const auto& s = r.stats;
  err << std::fixed << std::setprecision(3);
  err << "light_evaluation_ms " << s.light_ms << '\n'
      << "lspm_ms " << s.lspm_ms << '\n'
      << "partition_ms " << s.partition_ms << '\n'
      << "host_to_device_ms " << s.transfer_in_ms << '\n'
      << "main_computation_ms " << s.eval_ms << '\n'
      << "device_to_host_ms " << s.transfer_out_ms << '\n'
      << "post_processing_ms " << s.post_ms << '\n'
      << "host_to_device_bytes " << s.bytes_in << '\n'
      << "device_to_host_bytes " << s.bytes_out << '\n'
      << "rows_scanned " << s.rows_scanned << '\n'
      << "cols_scanned " << s.cols_scanned << '\n'
      << "bindings " << s.bindings << '\n'
      << "trees_formed " << s.trees_formed << '\n'
      << "trees_deleted " << s.trees_deleted << '\n'
      << "misses " << s.misses << '\n'
      << "post_mode " << to_string(r.post) << '\n'
      << "pruned_nodes " << r.pruned_nodes << '\n'
      << "solutions " << r.solutions.rows.size() << '\n';
  err << std::defaultfloat;
}

std::vector<PartitionSpec> parse_configs(const std::string& s) {
  std::vector<PartitionSpec> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw UsageError("bad config '" + item + "', expected NPxNT");
    PartitionSpec p{std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1))};
    if (p.np == 0 || p.nt == 0) throw UsageError("np and nt must be at least 1");
    out.push_back(p);
  }
  return out;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot write " + path);
    }
    out_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void emit_solutions(std::ostream& out, const Options& o, const SolutionSet& s, const Dictionary& dict) {
  if (o.format == "json") {
    write_json(out, s, dict);
  } else {
    write_csv(out, s, dict);
  }
}

int cmd_load(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<QueryGraph> qs;
  if (!o.query_text.empty() || !o.query_files.empty()) {
    for (const auto& [name, text] : queries_of(o)) qs.push_back(parse_query(text));
  }
  LoadTimings t;
  const Encoded e = load_dataset(o, qs, err, t);
  const auto t0 = Clock::now();
  PredicateSet all;
  for (PredicateId p = 1; p <= e.dictionary.predicate_count(); ++p) all.insert(p);
  const auto csr = build_csr(e.triples, all);
  const auto csc = build_csc(e.triples, all);
  const double lspm_ms = ms_since(t0);
  Output dst(o.out_path, out);
  json j = {{"entities", e.dictionary.entity_count()},
            {"predicates", e.dictionary.predicate_count()},
            {"triples", e.triples.triples.size()},
            {"csr_rows", csr.rows()},
            {"csc_cols", csc.cols()},
            {"from_cache", t.from_cache},
            {"read_ms", t.read_ms},
            {"encode_ms", t.encode_ms},
            {"lspm_ms", lspm_ms},
            {"lspm_bytes", csr.byte_size() + csc.byte_size()}};
  *dst << j.dump(2) << '\n';
  return 0;
}

int cmd_plan(const Options& o, std::ostream& out) {
  const auto qs = queries_of(o);
  const auto g = parse_query(qs.front().second);
  const auto plan = plan_query(g, resolve_traversal(traversal_of(o)));
  Output dst(o.out_path, out);
  *dst << plan_json(g, plan, o.dump_graph).dump(2) << '\n';
  return 0;
}

int cmd_partition(const Options& o, std::ostream& out, std::ostream& err) {
  const auto qs = queries_of(o);
  const auto g = parse_query(qs.front().second);
  LoadTimings t;
  const Encoded e = load_dataset(o, {g}, err, t);
  EngineOptions eo;
  eo.traversal = traversal_of(o);
  eo.spec = {o.np, o.nt};
  const auto r = run_query(e, g, eo);
  Output dst(o.out_path, out);
  *dst << partition_json(r.partition).dump(2) << '\n';
  return 0;
}

int cmd_query(const Options& o, bool oracle, std::ostream& out, std::ostream& err) {
  const auto qs = queries_of(o);
  const auto g = parse_query(qs.front().second);
  LoadTimings t;
  const Encoded e = load_dataset(o, {g}, err, t);
  Output dst(o.out_path, out);
  if (oracle) {
    emit_solutions(*dst, o, brute_force(e, g), e.dictionary);
    return 0;
  }
  EngineOptions eo;
  eo.traversal = traversal_of(o);
  eo.spec = {o.np, o.nt};
  eo.exec.pre_pruning = !o.no_prepruning;
  eo.verify = o.verify;
  const auto r = run_query(e, g, eo);
  emit_solutions(*dst, o, r.solutions, e.dictionary);
  if (o.dump_trees) dump_trees(err, g, r.plan, r.pools, e.dictionary);
  if (o.stats) write_stats(err, r);
  return 0;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  const auto qs = queries_of(o);
  std::vector<QueryGraph> graphs;
  for (const auto& [name, text] : qs) graphs.push_back(parse_query(text));
  LoadTimings t;
  const Encoded e = load_dataset(o, graphs, err, t);
  const auto configs = parse_configs(o.configs);
  Output dst(o.out_path, out);
  *dst << "query,traversal,np,nt,status,light_evaluation_ms,lspm_ms,partition_ms,host_to_device_ms,"
          "main_computation_ms,device_to_host_ms,post_processing_ms,total_ms,host_to_device_bytes,"
          "device_to_host_bytes,rows_scanned,solutions\n";
  *dst << std::fixed << std::setprecision(3);
  for (std::size_t q = 0; q < graphs.size(); ++q) {
    const std::string label = csv_field(std::filesystem::path(qs[q].first).stem().string());
    for (auto trav : {Traversal::direction, Traversal::degree}) {
      for (const auto& spec : configs) {
        if (trav == Traversal::direction && graphs[q].has_constants()) {
          *dst << label << ",direction," << spec.np << ',' << spec.nt << ",refused,,,,,,,,,,,,\n";
          continue;
        }
        EngineOptions eo;
        eo.traversal = trav;
        eo.spec = spec;
        for (std::size_t rep = 0; rep < std::max<std::size_t>(o.repeat, 1); ++rep) {
          const auto t0 = Clock::now();
          const auto r = run_query(e, graphs[q], eo);
          const double total = ms_since(t0);
          const auto& s = r.stats;
          *dst << label << ',' << to_string(trav) << ',' << spec.np << ',' << spec.nt << ",ok," << s.light_ms << ','
               << s.lspm_ms << ',' << s.partition_ms << ',' << s.transfer_in_ms << ',' << s.eval_ms << ','
               << s.transfer_out_ms << ',' << s.post_ms << ',' << total << ',' << s.bytes_in << ',' << s.bytes_out
               << ',' << s.rows_scanned << ',' << r.solutions.rows.size() << '\n';
        }
      }
    }
  }
  return 0;
}

}  // namespace

void write_csv(std::ostream& out, const SolutionSet& s, const Dictionary& dict) {
  for (std::size_t i = 0; i < s.variables.size(); ++i) out << (i ? "," : "") << csv_field(s.variables[i]);
  out << '\n';
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(display_term(dict.entity(row[i])));
    out << '\n';
  }
}

void write_json(std::ostream& out, const SolutionSet& s, const Dictionary& dict) {
  json a = json::array();
  for (const auto& row : s.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[s.variables[i]] = display_term(dict.entity(row[i]));
    a.push_back(obj);
  }
  out << a.dump(2) << '\n';
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SPARQL basic graph pattern engine over sparse RDF matrices", "matsparql"};
  app.require_subcommand(1);
  Options o;

  auto add_query = [&](CLI::App* c) {
    c->add_option("--query", o.query_text, "Query text");
    c->add_option("--query-file", o.query_files, "Query file (repeatable for bench)");
  };
  auto add_data = [&](CLI::App* c) {
    c->add_option("data", o.data, "N-Triples data file")->required()->check(CLI::ExistingFile);
    c->add_option("--cache", o.cache, "Binary cache path");
    c->add_option("--entity-order", o.entity_order, "File listing entities to number first")->check(CLI::ExistingFile);
  };
  auto add_traversal = [&](CLI::App* c) {
    c->add_option("--traversal", o.traversal, "direction | degree | auto")
        ->check(CLI::IsMember({"direction", "degree", "auto"}));
  };
  auto add_spec = [&](CLI::App* c) {
    c->add_option("--np", o.np, "Logical nodes")->check(CLI::PositiveNumber);
    c->add_option("--nt", o.nt, "Workers per node")->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out_path, "Write output to this file"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* load = app.add_subcommand("load", "Encode data, build LSpM and write the cache");
  add_data(load);
  add_query(load);
  add_out(load);

  auto* plan = app.add_subcommand("plan", "Print the query plan as JSON");
  add_query(plan);
  add_traversal(plan);
  add_out(plan);
  plan->add_flag("--dump-graph", o.dump_graph, "Include the query graph");

  auto* part = app.add_subcommand("partition", "Print node assignments as JSON");
  add_data(part);
  add_query(part);
  add_traversal(part);
  add_spec(part);
  add_out(part);

  auto* query = app.add_subcommand("query", "Evaluate a query");
  add_data(query);
  add_query(query);
  add_traversal(query);
  add_spec(query);
  add_format(query);
  add_out(query);
  query->add_flag("--stats", o.stats, "Print execution statistics to stderr");
  query->add_flag("--dump-trees", o.dump_trees, "Print binding trees to stderr");
  query->add_flag("--no-prepruning", o.no_prepruning, "Disable pre-pruning");
  query->add_flag("--verify", o.verify, "Re-check every solution against the data");

  auto* oracle = app.add_subcommand("oracle", "Evaluate a query with the nested-loop reference");
  add_data(oracle);
  add_query(oracle);
  add_format(oracle);
  add_out(oracle);

  auto* bench = app.add_subcommand("bench", "Time queries over traversals and partition settings (CSV)");
  add_data(bench);
  add_query(bench);
  add_out(bench);
  bench->add_option("--configs", o.configs, "Comma-separated NPxNT list");
  bench->add_option("--repeat", o.repeat, "Runs per setting");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*load) return cmd_load(o, out, err);
    if (*plan) return cmd_plan(o, out);
    if (*part) return cmd_partition(o, out, err);
    if (*query) return cmd_query(o, false, out, err);
    if (*oracle) return cmd_query(o, true, out, err);
    if (*bench) return cmd_bench(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: parse error at " << e.what() << '\n';
    return 1;
  } catch (const PlanError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace matsparql::cli
