#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "matsparql/oracle.hpp"

namespace matsparql {
namespace {

Encoded load(const std::string& nt) {
  std::istringstream in(nt);
  return encode(parse_ntriples(in));
}

std::vector<std::vector<std::string>> named(const SolutionSet& s, const Dictionary& d) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : s.rows) {
    std::vector<std::string> r;
    for (EntityId x : row) r.push_back(d.entity(x));
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Oracle, CrewQueryByHand) {
  const auto g = testing::crew_query();
  const auto data = testing::movies();
  const auto s = brute_force(data, g);
  EXPECT_EQ(s.variables, (std::vector<std::string>{"v0", "v1", "v2", "v3"}));
  EXPECT_EQ(named(s, data.dictionary), (std::vector<std::vector<std::string>>{
                                           {"Product0", "User0", "User1", "User0"},
                                           {"Product0", "User0", "User1", "User4"}}));
}

TEST(Oracle, ConstantSubject) {
  const auto g = parse_query(testing::read_text(testing::data_path("crew_const.rq")));
  const auto data = testing::movies_for(g);
  EXPECT_EQ(named(brute_force(data, g), data.dictionary),
            (std::vector<std::vector<std::string>>{{"User0", "User1"}, {"User4", "User3"}}));
}

TEST(Oracle, ProjectionDeduplicates) {
  const auto data = load("<a> <p> <b> .\n<a> <p> <c> .\n<d> <p> <b> .\n");
  const auto s = brute_force(data, parse_query("SELECT ?x { ?x <p> ?y }"));
  EXPECT_EQ(named(s, data.dictionary), (std::vector<std::vector<std::string>>{{"a"}, {"d"}}));
}

TEST(Oracle, SelfLoopAndRepeatedVariable) {
  const auto data = load("<a> <p> <a> .\n<a> <p> <b> .\n<b> <q> <b> .\n");
  EXPECT_EQ(named(brute_force(data, parse_query("SELECT * { ?x <p> ?x }")), data.dictionary),
            (std::vector<std::vector<std::string>>{{"a"}}));
  EXPECT_EQ(named(brute_force(data, parse_query("SELECT * { ?x <p> ?y . ?y <q> ?y }")), data.dictionary),
            (std::vector<std::vector<std::string>>{{"a", "b"}}));
}

TEST(Oracle, UnknownTermsMatchNothing) {
  const auto data = load("<a> <p> <b> .\n");
  EXPECT_TRUE(brute_force(data, parse_query("SELECT * { ?x <zz> ?y }")).rows.empty());
  EXPECT_TRUE(brute_force(data, parse_query("SELECT * { <nobody> <p> ?y }")).rows.empty());
}

TEST(Oracle, LiteralObject) {
  const auto data = load("<a> <name> \"Alice\"@en .\n<b> <name> \"Bob\" .\n");
  const auto s = brute_force(data, parse_query("SELECT ?x { ?x <name> \"Bob\" }"));
  EXPECT_EQ(named(s, data.dictionary), (std::vector<std::vector<std::string>>{{"b"}}));
}

TEST(Oracle, ParallelEdgesBetweenSamePair) {
  const auto data = load("<a> <p> <b> .\n<a> <q> <b> .\n<c> <p> <b> .\n");
  const auto s = brute_force(data, parse_query("SELECT * { ?x <p> ?y . ?x <q> ?y }"));
  EXPECT_EQ(named(s, data.dictionary), (std::vector<std::vector<std::string>>{{"a", "b"}}));
}

TEST(Oracle, CountMappingsStopsAtLimit) {
  const auto data = load("<a> <p> <b> .\n<a> <p> <c> .\n<d> <p> <b> .\n");
  const auto g = parse_query("SELECT ?x { ?x <p> ?y }");
  EXPECT_EQ(count_mappings(data, g), 3u);
  EXPECT_EQ(count_mappings(data, g, 2), 2u);
  EXPECT_EQ(count_mappings(data, parse_query("SELECT * { <zz> <p> ?y }")), 0u);
}

}  // namespace
}  // namespace matsparql
