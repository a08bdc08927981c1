#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "matsparql/binding_tree.hpp"
#include "matsparql/engine.hpp"
#include "matsparql/oracle.hpp"
#include "matsparql/workload.hpp"

namespace matsparql {
namespace {

TreeNode leaf(EntityId v) { return {v, {}}; }

// Trees of node0/thread1 for the crew query at 2x2, before post-processing.
TreePool sample_pool() {
  RootGroup g{1, {}};
  g.trees.push_back({1, {leaf(0)}});
  g.trees.push_back({1, {leaf(0), leaf(5)}});
  g.trees.push_back({1, {{2, {leaf(0), leaf(5)}}}});
  return {g};
}

bool no_childless_internal(const TreeNode& t, std::size_t depth, std::size_t len) {
  if (depth + 1 == len) return true;
  if (t.children.empty()) return false;
  return std::all_of(t.children.begin(), t.children.end(),
                     [&](const TreeNode& c) { return no_childless_internal(c, depth + 1, len); });
}

TEST(PostMode, DecisionTable) {
  const auto crew = testing::crew_query();
  EXPECT_EQ(select_postprocessing(crew, plan_degree(crew)), PostMode::local);
  EXPECT_EQ(select_postprocessing(crew, plan_direction(crew)), PostMode::local_then_global);

  const auto star = parse_query("SELECT * { ?a <p> ?b . ?a <q> ?c }");
  EXPECT_EQ(select_postprocessing(star, plan_degree(star)), PostMode::none);

  const auto two_roots = parse_query("SELECT * { ?a <p> ?x . ?b <q> ?x . ?x <r> ?y }");
  EXPECT_EQ(plan_direction(two_roots).roots.size(), 2u);
  EXPECT_EQ(select_postprocessing(two_roots, plan_direction(two_roots)), PostMode::global);
  EXPECT_EQ(plan_degree(two_roots).roots.size(), 1u);
  EXPECT_EQ(select_postprocessing(two_roots, plan_degree(two_roots)), PostMode::none);

  const auto consts = parse_query("SELECT * { <c> <p> ?a . ?a <q> ?b . ?b <r> <d> }");
  EXPECT_EQ(select_postprocessing(consts, plan_degree(consts)), PostMode::local);
}

TEST(LocalPrune, RemovesBindingFiveOfV1) {
  const auto plan = plan_degree(testing::crew_query());
  EXPECT_EQ(local_common(plan, 0), (std::vector<VertexId>{1}));
  TreePool pool = sample_pool();
  const std::size_t removed = local_prune(pool, plan, 0, local_common(plan, 0));
  EXPECT_EQ(removed, 1u);
  ASSERT_EQ(pool.size(), 1u);
  EXPECT_EQ(pool[0].trees[0], (TreeNode{1, {leaf(0)}}));
  EXPECT_EQ(pool[0].trees[1], (TreeNode{1, {leaf(0), leaf(5)}}));
  EXPECT_EQ(pool[0].trees[2], (TreeNode{1, {{2, {leaf(0)}}}}));
}

TEST(LocalPrune, EmptyOmegaIsIdentity) {
  const auto plan = plan_degree(testing::crew_query());
  TreePool pool = sample_pool();
  EXPECT_EQ(local_prune(pool, plan, 0, {}), 0u);
  EXPECT_EQ(pool, sample_pool());
}

TEST(LocalPrune, EmptiedLevelDropsWholeGroup) {
  const auto plan = plan_degree(testing::crew_query());
  TreePool pool = sample_pool();
  pool[0].trees[2] = {1, {{2, {leaf(5)}}}};  // no continuation agrees with tree 0
  local_prune(pool, plan, 0, local_common(plan, 0));
  EXPECT_TRUE(pool.empty());
}

TEST(LocalPrune, Idempotent) {
  const auto plan = plan_degree(testing::crew_query());
  TreePool once = sample_pool();
  local_prune(once, plan, 0, local_common(plan, 0));
  TreePool twice = once;
  EXPECT_EQ(local_prune(twice, plan, 0, local_common(plan, 0)), 0u);
  EXPECT_EQ(once, twice);
}

struct TwoRoots {
  QueryGraph g = parse_query("SELECT * { ?a <p> ?x . ?b <q> ?x }");
  QueryPlan plan = plan_direction(g);
};

TEST(GlobalPrune, IntersectsSharedVariable) {
  TwoRoots t;
  ASSERT_EQ(t.plan.roots, (std::vector<VertexId>{0, 2}));
  EXPECT_EQ(global_common(t.plan), (std::vector<VertexId>{1}));
  std::vector<TreePool> pools(2);
  pools[0] = {RootGroup{7, {{7, {leaf(1), leaf(4)}}}}};
  pools[1] = {RootGroup{8, {{8, {leaf(4)}}}}, RootGroup{9, {{9, {leaf(5)}}}}};
  global_prune(pools, t.plan, global_common(t.plan));
  ASSERT_EQ(pools[0].size(), 1u);
  EXPECT_EQ(pools[0][0].trees[0], (TreeNode{7, {leaf(4)}}));
  ASSERT_EQ(pools[1].size(), 1u);
  EXPECT_EQ(pools[1][0].binding, 8u);
}

TEST(GlobalPrune, EmptyPoolEmptiesAll) {
  TwoRoots t;
  std::vector<TreePool> pools(2);
  pools[0] = {RootGroup{7, {{7, {leaf(1)}}}}};
  global_prune(pools, t.plan, global_common(t.plan));
  EXPECT_TRUE(pools[0].empty());
  EXPECT_TRUE(pools[1].empty());
}

TEST(GlobalPrune, SingleRootHasNoPhi) {
  const auto plan = plan_degree(testing::crew_query());
  EXPECT_TRUE(global_common(plan).empty());
}

TEST(Enumerate, CrewQuerySolutions) {
  const auto data = testing::movies();
  const auto g = testing::crew_query();
  const auto plan = plan_degree(g);
  const auto rq = resolve(g, data.dictionary);
  std::vector<TreePool> pools = {sample_pool()};
  postprocess(pools, g, plan, PostMode::local);
  const auto s = enumerate_solutions(pools, g, plan, rq, nullptr);
  EXPECT_EQ(s.variables, (std::vector<std::string>{"v0", "v1", "v2", "v3"}));
  EXPECT_EQ(s.rows, (std::vector<std::vector<EntityId>>{{2, 0, 1, 0}, {2, 0, 1, 5}}));
  EXPECT_EQ(s, brute_force(data, g));
}

TEST(Enumerate, EmptyPools) {
  const auto data = testing::movies();
  const auto g = testing::crew_query();
  const auto plan = plan_degree(g);
  std::vector<TreePool> pools(1);
  EXPECT_TRUE(enumerate_solutions(pools, g, plan, resolve(g, data.dictionary), nullptr).rows.empty());
}

TEST(Enumerate, RepeatedVariableWithinPathMustAgree) {
  // Cycle through the root: a -> b -> c -> a.
  const auto g = parse_query("SELECT * { ?a <p> ?b . ?b <p> ?c . ?c <p> ?a }");
  const auto plan = plan_direction(g);
  ASSERT_EQ(plan.paths[0], (std::vector<std::vector<VertexId>>{{0, 1, 2, 0}}));
  std::vector<TreePool> pools = {{RootGroup{0, {{0, {{1, {{2, {leaf(0), leaf(3)}}}}}}}}}};
  ResolvedQuery rq{{1, 1, 1}, {kAbsent, kAbsent, kAbsent}};
  const auto s = enumerate_solutions(pools, g, plan, rq, nullptr);
  EXPECT_EQ(s.rows, (std::vector<std::vector<EntityId>>{{0, 1, 2}}));
}

// Pruning never drops an oracle solution, leaves no childless internal
// node, and is idempotent.
TEST(Pruning, PropertiesOnRandomInstances) {
  workload::Rng rng(11);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    const auto raw = workload::random_triples({20, 3, 90}, rng);
    const auto data = encode(raw);
    workload::RandomQuerySpec spec;
    spec.shape = static_cast<workload::Shape>(round % 4);
    spec.edges = 2 + round % 3;
    spec.cycle = round % 2 == 0;
    const auto g = workload::random_query(data, spec, rng);
    for (auto t : {Traversal::degree, Traversal::direction}) {
      EngineOptions opts;
      opts.traversal = t;
      const auto r = run_query(data, g, opts);
      const auto oracle = brute_force(data, g);
      ASSERT_EQ(r.solutions, oracle) << print_query(g);
      for (std::size_t root = 0; root < r.pools.size(); ++root) {
        for (const auto& grp : r.pools[root]) {
          for (std::size_t i = 0; i < grp.trees.size(); ++i) {
            EXPECT_TRUE(no_childless_internal(grp.trees[i], 0, r.plan.paths[root][i].size()));
          }
        }
      }
      auto again = r.pools;
      const std::size_t removed = postprocess(again, g, r.plan, r.post, nullptr);
      EXPECT_EQ(removed, 0u);
      EXPECT_EQ(again, r.pools);
      // Every solution value survives in the pools.
      for (const auto& row : oracle.rows) {
        for (std::size_t root = 0; root < r.pools.size(); ++root) {
          const VertexId rv = r.plan.roots[root];
          const auto col = std::find(g.projection.begin(), g.projection.end(), rv);
          if (col == g.projection.end()) continue;
          const EntityId want = row[static_cast<std::size_t>(col - g.projection.begin())];
          EXPECT_TRUE(std::any_of(r.pools[root].begin(), r.pools[root].end(),
                                  [&](const RootGroup& rg) { return rg.binding == want; }));
        }
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 300);
}

}  // namespace
}  // namespace matsparql
