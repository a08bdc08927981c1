#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "matsparql/engine.hpp"
#include "matsparql/oracle.hpp"
#include "matsparql/workload.hpp"

namespace matsparql {
namespace {

const std::vector<PartitionSpec> kSpecs{{1, 1}, {2, 2}, {4, 3}, {3, 1}};

TEST(Engine, CrewQueryBothTraversals) {
  const auto g = testing::crew_query();
  const auto data = testing::movies();
  const auto oracle = brute_force(data, g);
  ASSERT_EQ(oracle.rows.size(), 2u);
  for (auto t : {Traversal::direction, Traversal::degree}) {
    for (const auto& spec : kSpecs) {
      EngineOptions o;
      o.traversal = t;
      o.spec = spec;
      o.exec.strict = true;
      const auto r = run_query(data, g, o);
      EXPECT_EQ(r.solutions, oracle) << to_string(t) << " " << spec.np << "x" << spec.nt;
      EXPECT_EQ(r.stats.misses, 0u);
    }
  }
}

TEST(Engine, ConstantQuery) {
  const auto g = parse_query(testing::read_text(testing::data_path("crew_const.rq")));
  const auto data = testing::movies_for(g);
  EngineOptions o;
  o.spec = {2, 2};
  const auto r = run_query(data, g, o);
  EXPECT_EQ(r.plan.traversal, Traversal::degree);
  EXPECT_EQ(r.solutions, brute_force(data, g));
  EXPECT_EQ(r.solutions.rows.size(), 2u);

  o.traversal = Traversal::direction;
  EXPECT_THROW(run_query(data, g, o), PlanError);
}

TEST(Engine, AutoMeansDegree) {
  EXPECT_EQ(resolve_traversal(std::nullopt), Traversal::degree);
  EXPECT_EQ(resolve_traversal(Traversal::direction), Traversal::direction);
}

TEST(Engine, KeepSetsFollowEdgeClasses) {
  const auto g = testing::crew_query();
  const auto data = testing::movies();
  const auto rq = resolve(g, data.dictionary);
  const auto [csr_keep, csc_keep] = keep_sets(g, plan_degree(g), rq);
  // Degree plan on v2: e1 and e3 opposite, e2 and e0 consistent.
  EXPECT_EQ(csr_keep, (PredicateSet{testing::kFollows, testing::kActor}));
  EXPECT_EQ(csc_keep, (PredicateSet{testing::kFollows, testing::kDirector}));
}

TEST(Engine, UnknownPredicateGivesEmptyResult) {
  const auto g = parse_query("SELECT * { ?a <follows> ?b . ?b <nothing> ?c }");
  const auto data = testing::movies_for(testing::crew_query());
  const auto r = run_query(data, g);
  EXPECT_TRUE(r.solutions.rows.empty());
}

TEST(Engine, UnsatisfiableConstantShortCircuits) {
  const auto g = parse_query("SELECT * { <Nobody> <follows> ?a . ?a <follows> ?b }");
  const auto data = testing::movies();
  const auto r = run_query(data, g);
  EXPECT_TRUE(r.solutions.rows.empty());
}

TEST(Engine, VerifyDoesNotChangeCorrectResults) {
  const auto g = testing::crew_query();
  const auto data = testing::movies();
  EngineOptions o;
  o.verify = true;
  EXPECT_EQ(run_query(data, g, o).solutions, brute_force(data, g));
}

TEST(Engine, PartitionInvarianceStrict) {
  workload::Rng rng(77);
  std::size_t checked = 0;
  for (int round = 0; round < 60; ++round) {
    const auto data = encode(workload::random_triples({40, 4, 200}, rng));
    workload::RandomQuerySpec qs;
    qs.shape = static_cast<workload::Shape>(round % 4);
    qs.edges = 2 + round % 4;
    qs.constants = round % 3 == 0 ? 1 : 0;
    qs.cycle = round % 5 == 0;
    const auto g = workload::random_query(data, qs, rng);
    const auto oracle = brute_force(data, g);
    for (const auto& spec : kSpecs) {
      EngineOptions o;
      o.spec = spec;
      o.exec.strict = true;
      const auto r = run_query(data, g, o);
      ASSERT_EQ(r.solutions, oracle) << print_query(g) << " " << spec.np << "x" << spec.nt;
      ASSERT_EQ(r.stats.misses, 0u);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 60u * kSpecs.size());
}

TEST(Engine, PrePruningOnlyReducesScans) {
  workload::Rng rng(5);
  for (int round = 0; round < 40; ++round) {
    const auto data = encode(workload::random_triples({30, 4, 180}, rng));
    workload::RandomQuerySpec qs;
    qs.shape = static_cast<workload::Shape>(round % 4);
    qs.edges = 3 + round % 3;
    const auto g = workload::random_query(data, qs, rng);
    EngineOptions on;
    EngineOptions off;
    off.exec.pre_pruning = false;
    const auto a = run_query(data, g, on);
    const auto b = run_query(data, g, off);
    ASSERT_EQ(a.solutions, b.solutions) << print_query(g);
    EXPECT_LE(a.stats.rows_scanned + a.stats.cols_scanned, b.stats.rows_scanned + b.stats.cols_scanned);
  }
}

TEST(Engine, StatsArePopulated) {
  const auto g = testing::crew_query();
  const auto data = testing::movies();
  EngineOptions o;
  o.spec = {2, 2};
  const auto r = run_query(data, g, o);
  EXPECT_GT(r.stats.bytes_in, 0u);
  EXPECT_GT(r.stats.bytes_out, 0u);
  EXPECT_GT(r.stats.rows_scanned, 0u);
  EXPECT_EQ(r.run.workers.size(), 4u);
  EXPECT_GE(r.stats.eval_ms, 0.0);
}

}  // namespace
}  // namespace matsparql
