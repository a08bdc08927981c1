#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "matsparql/engine.hpp"
#include "matsparql/light.hpp"
#include "matsparql/partitioner.hpp"

namespace matsparql {
namespace {

using Ids = std::vector<EntityId>;

struct CrewMatrices {
  Encoded data = testing::movies();
  QueryGraph g = testing::crew_query();
  QueryPlan plan = plan_degree(g);
  LspmCsr csr = build_csr(data.triples, {testing::kFollows, testing::kActor});
  LspmCsc csc = build_csc(data.triples, {testing::kFollows, testing::kDirector});
};

TEST(BlockSplit, RemainderGoesToEarliestParts) {
  const auto b = block_split({1, 2, 3, 4, 5, 6, 7}, 3);
  EXPECT_EQ(b, (std::vector<Ids>{{1, 2, 3}, {4, 5}, {6, 7}}));
  const auto e = block_split({1, 2}, 4);
  EXPECT_EQ(e, (std::vector<Ids>{{1}, {2}, {}, {}}));
  EXPECT_THROW(block_split({}, 0), std::invalid_argument);
}

TEST(Partitioner, FirstStageOfCrewQuery) {
  CrewMatrices f;
  const auto p = partition_first_stage(f.csr, &f.csc, f.plan, {2, 2});
  ASSERT_EQ(p.nodes.size(), 2u);
  EXPECT_EQ(p.nodes[0].held_rows, (Ids{0, 1}));
  EXPECT_EQ(p.nodes[0].held_cols, (Ids{0, 1}));
  EXPECT_EQ(p.nodes[1].held_rows, (Ids{4, 5}));
  EXPECT_EQ(p.nodes[1].held_cols, (Ids{4, 5}));
  EXPECT_EQ(p.nodes[0].workers[0].indices, (Ids{0}));
  EXPECT_EQ(p.nodes[0].workers[1].indices, (Ids{1}));
  EXPECT_EQ(p.nodes[1].workers[0].indices, (Ids{4}));
  EXPECT_EQ(p.nodes[1].workers[1].indices, (Ids{5}));
  EXPECT_EQ(p.nodes[0].au, (Ids{0, 1}));
  EXPECT_EQ(p.dropped_rows, (Ids{2}));
  EXPECT_EQ(p.dropped_cols, (Ids{3}));
}

TEST(Partitioner, NextStageOfCrewQuery) {
  CrewMatrices f;
  const auto p = partition(f.csr, &f.csc, f.plan, {2, 2});
  EXPECT_EQ(p.nodes[0].extra_rows[1], (Ids{2, 5}));
  EXPECT_EQ(p.nodes[1].extra_rows[1], (Ids{2}));
  EXPECT_TRUE(p.nodes[0].extra_cols[1].empty());
  EXPECT_EQ(p.nodes[0].held_rows, (Ids{0, 1, 2, 5}));
  EXPECT_EQ(p.nodes[1].held_rows, (Ids{4, 5, 2}));
  // ir covers exactly the held rows
  for (const auto& node : p.nodes) {
    std::size_t covered = 0;
    for (std::size_t x = 0; x < 8; ++x) {
      if (node.holds_row(x)) {
        ++covered;
        EXPECT_EQ(node.held_rows[node.ir[x]], x);
      }
    }
    EXPECT_EQ(covered, node.held_rows.size());
    EXPECT_EQ(node.ir.size(), 8u);
    EXPECT_EQ(node.ic.size(), 8u);
  }
}

TEST(Partitioner, SingleWorkerHoldsEverythingEligible) {
  CrewMatrices f;
  const auto p = partition_first_stage(f.csr, &f.csc, f.plan, {1, 1});
  EXPECT_EQ(p.nodes[0].workers[0].indices, (Ids{0, 1, 4, 5}));
}

TEST(Partitioner, ConsistentStarSplitsRows) {
  const auto data = testing::movies();
  const auto g = parse_query("SELECT * { ?x <follows> ?y }");
  const auto plan = plan_degree(g);
  const auto csr = build_csr(data.triples, {testing::kFollows});
  const auto p = partition(csr, nullptr, plan, {2, 2});
  EXPECT_EQ(p.nodes[0].workers[0].indices, (Ids{0}));
  EXPECT_EQ(p.nodes[0].workers[1].indices, (Ids{1}));
  EXPECT_EQ(p.nodes[1].workers[0].indices, (Ids{4}));
  EXPECT_EQ(p.nodes[1].workers[1].indices, (Ids{5}));
  EXPECT_TRUE(p.nodes[0].held_cols.empty());
}

TEST(Partitioner, MorePartsThanRows) {
  CrewMatrices f;
  const auto p = partition(f.csr, &f.csc, f.plan, {3, 2});
  std::size_t total = 0;
  for (const auto& n : p.nodes) {
    for (const auto& w : n.workers) total += w.indices.size();
  }
  EXPECT_EQ(total, 4u);
  EXPECT_TRUE(p.nodes[2].workers[1].indices.empty());
}

TEST(Partitioner, ZeroSpecRejected) {
  CrewMatrices f;
  EXPECT_THROW(partition(f.csr, &f.csc, f.plan, {0, 1}), std::invalid_argument);
}

TEST(Partitioner, ConstantsUseLightBindings) {
  // Root ?x has light bindings {3, 9, 12}; out-edges only.
  std::vector<RawTriple> raw;
  for (int s : {3, 9, 12}) {
    raw.push_back({"c", "p", "e" + std::to_string(s)});
    raw.push_back({"e" + std::to_string(s), "q", "z"});
  }
  raw.push_back({"e5", "q", "z"});
  for (int s = 0; s <= 12; ++s) raw.push_back({"e" + std::to_string(s), "fill", "e" + std::to_string(s)});
  std::vector<std::string> order = {"e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9", "e10", "e11", "e12"};
  const auto data = encode(raw, order);
  const auto g = parse_query("SELECT ?x { <c> <p> ?x . ?x <q> ?y }");
  const auto plan = plan_degree(g);
  const auto rq = resolve(g, data.dictionary);
  const auto light = eval_light(data.triples, g, rq, plan.light);
  ASSERT_TRUE(light.constrains(1));
  EXPECT_EQ(*light.vertex_bindings[1], (Ids{3, 9, 12}));
  const auto [rows, cols] = keep_sets(g, plan, rq);
  const auto csr = build_csr(data.triples, rows);
  const auto p = partition_with_constants(light, csr, nullptr, plan, {1, 3});
  EXPECT_EQ(p.nodes[0].workers[0].indices, (Ids{3}));
  EXPECT_EQ(p.nodes[0].workers[1].indices, (Ids{9}));
  EXPECT_EQ(p.nodes[0].workers[2].indices, (Ids{12}));
}

TEST(Partitioner, ConstantsWithNoBindingsShortCircuit) {
  const auto data = testing::movies();
  const auto g = parse_query("SELECT ?x { <User2> <follows> ?x . ?x <follows> ?y }");
  const auto plan = plan_degree(g);
  const auto rq = resolve(g, data.dictionary);
  const auto light = eval_light(data.triples, g, rq, plan.light);
  EXPECT_TRUE(light.unsatisfiable);
  const auto csr = build_csr(data.triples, {testing::kFollows});
  const auto p = partition_with_constants(light, csr, nullptr, plan, {2, 2});
  EXPECT_TRUE(p.empty_result);
  for (const auto& n : p.nodes) {
    for (const auto& w : n.workers) EXPECT_TRUE(w.indices.empty());
  }
}

TEST(Partitioner, ConstantsMixedRootHoldsRowAndColumn) {
  // ?x has an in-edge and an out-edge besides its light edge.
  std::vector<RawTriple> raw = {{"c", "p", "e3"}, {"e3", "q", "a"}, {"b", "r", "e3"}};
  for (int s = 0; s <= 3; ++s) raw.push_back({"e" + std::to_string(s), "fill", "e" + std::to_string(s)});
  std::vector<std::string> order = {"e0", "e1", "e2", "e3"};
  const auto data = encode(raw, order);
  const auto g = parse_query("SELECT ?x { <c> <p> ?x . ?x <q> ?y . ?z <r> ?x }");
  const auto plan = plan_degree(g);
  const auto rq = resolve(g, data.dictionary);
  const auto light = eval_light(data.triples, g, rq, plan.light);
  const auto [rows, cols] = keep_sets(g, plan, rq);
  const auto csr = build_csr(data.triples, rows);
  const auto csc = build_csc(data.triples, cols);
  const auto p = partition_with_constants(light, csr, &csc, plan, {1, 1});
  EXPECT_EQ(p.nodes[0].workers[0].rows, (Ids{3}));
  EXPECT_EQ(p.nodes[0].workers[0].cols, (Ids{3}));
}

}  // namespace
}  // namespace matsparql
