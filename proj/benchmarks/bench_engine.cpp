#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "matsparql/engine.hpp"
#include "matsparql/oracle.hpp"
#include "matsparql/workload.hpp"

namespace ms = matsparql;

namespace {

struct Workload {
  std::vector<std::string> names;
  std::vector<ms::QueryGraph> queries;
  ms::Encoded data;
};

const Workload& watdiv() {
  static const Workload w = [] {
    Workload w;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(MATSPARQL_QUERY_DIR)) {
      if (e.path().extension() == ".rq") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::unordered_set<std::string> preds;
    for (const auto& f : files) {
      std::ifstream in(f);
      std::stringstream ss;
      ss << in.rdbuf();
      w.names.push_back(f.stem().string());
      w.queries.push_back(ms::parse_query(ss.str()));
      for (const auto& p : w.queries.back().predicates()) preds.insert(p);
    }
    w.data = ms::encode(ms::filter_predicates(ms::workload::watdiv_like(100000, 42), preds));
    return w;
  }();
  return w;
}

void BM_Query(benchmark::State& state) {
  const auto& w = watdiv();
  const auto q = static_cast<std::size_t>(state.range(0));
  ms::EngineOptions o;
  o.spec = {static_cast<std::size_t>(state.range(1)), static_cast<std::size_t>(state.range(2))};
  std::size_t rows = 0;
  for (auto _ : state) {
    auto r = ms::run_query(w.data, w.queries[q], o);
    rows = r.solutions.rows.size();
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(w.names[q]);
  state.counters["solutions"] = static_cast<double>(rows);
}

void query_args(benchmark::internal::Benchmark* b) {
  for (int q = 0; q < 20; ++q) {
    b->Args({q, 1, 1});
    b->Args({q, 2, 4});
  }
}
BENCHMARK(BM_Query)->Apply(query_args)->Unit(benchmark::kMillisecond);

void BM_BuildLspm(benchmark::State& state) {
  const auto& w = watdiv();
  ms::PredicateSet all;
  for (ms::PredicateId p = 1; p <= w.data.dictionary.predicate_count(); ++p) all.insert(p);
  for (auto _ : state) {
    auto csr = ms::build_csr(w.data.triples, all);
    auto csc = ms::build_csc(w.data.triples, all);
    benchmark::DoNotOptimize(csr);
    benchmark::DoNotOptimize(csc);
  }
}
BENCHMARK(BM_BuildLspm)->Unit(benchmark::kMillisecond);

void BM_PrePruning(benchmark::State& state) {
  const auto& w = watdiv();
  ms::EngineOptions o;
  o.exec.pre_pruning = state.range(0) != 0;
  // C3: reviewer, reviewOf, purchased cycle
  const auto it = std::find(w.names.begin(), w.names.end(), "C3");
  const auto& g = w.queries[static_cast<std::size_t>(it - w.names.begin())];
  std::size_t scanned = 0;
  for (auto _ : state) {
    auto r = ms::run_query(w.data, g, o);
    scanned = r.stats.rows_scanned + r.stats.cols_scanned;
    benchmark::DoNotOptimize(r);
  }
  state.counters["scanned"] = static_cast<double>(scanned);
}
BENCHMARK(BM_PrePruning)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EngineVsOracle(benchmark::State& state) {
  ms::workload::Rng rng(7);
  const auto data = ms::encode(ms::workload::random_triples({50, 6, 300}, rng));
  ms::workload::RandomQuerySpec qs;
  qs.shape = ms::workload::Shape::snowflake;
  qs.edges = 4;
  const auto g = ms::workload::random_query(data, qs, rng);
  const bool oracle = state.range(0) != 0;
  for (auto _ : state) {
    if (oracle) {
      benchmark::DoNotOptimize(ms::brute_force(data, g));
    } else {
      benchmark::DoNotOptimize(ms::run_query(data, g));
    }
  }
  state.SetLabel(oracle ? "oracle" : "engine");
}
BENCHMARK(BM_EngineVsOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
