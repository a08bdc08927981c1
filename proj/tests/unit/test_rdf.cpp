#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "matsparql/rdf.hpp"

namespace matsparql {
namespace {

std::vector<RawTriple> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_ntriples(in);
}

TEST(NTriples, ParsesIriLine) {
  auto t = parse("<User0> <follows> <User1> .\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], (RawTriple{"User0", "follows", "User1"}));
}

TEST(NTriples, EmptyStream) { EXPECT_TRUE(parse("").empty()); }

TEST(NTriples, SkipsCommentsAndBlankLines) {
  auto t = parse("# header\n\n<a> <p> <b> .\n   \n# tail\n");
  EXPECT_EQ(t.size(), 1u);
}

TEST(NTriples, ArityErrorCarriesLine) {
  try {
    parse("<a> <b> .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(NTriples, MissingDotIsAnError) { EXPECT_THROW(parse("<a> <p> <b>\n"), ParseError); }

TEST(NTriples, LiteralsAndBareIdentifiers) {
  auto t = parse("a p \"hello world\"@en .\n<x> <y> \"5\"^^<int> .\nc q d.\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].object, "\"hello world\"@en");
  EXPECT_EQ(t[1].object, "\"5\"^^<int>");
  EXPECT_EQ(t[2].object, "d");
}

TEST(NTriples, SecondLineErrorReportsLineTwo) {
  try {
    parse("<a> <p> <b> .\n<a> <p> .\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(FilterPredicates, DropsFriendOf) {
  auto raw = parse_ntriples_file(testing::data_path("movies.nt"));
  ASSERT_EQ(raw.size(), 12u);
  auto kept = filter_predicates(raw, {"follows", "actor", "director"});
  EXPECT_EQ(kept.size(), 11u);
  for (const auto& t : kept) EXPECT_NE(t.predicate, "FriendOf");
  EXPECT_EQ(filter_predicates(raw, {"FriendOf"}).size(), 1u);
  EXPECT_TRUE(filter_predicates(raw, {}).empty());
}

TEST(Encode, PreferredOrderMapping) {
  const Encoded e = testing::movies();
  EXPECT_EQ(e.triples.n, 8u);
  EXPECT_EQ(e.triples.triples.size(), 11u);
  const auto order = testing::movies_order();
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(e.dictionary.entity_id(order[i]), i) << order[i];
  EXPECT_EQ(e.dictionary.predicate_id("follows"), 1u);
  EXPECT_EQ(e.dictionary.predicate_id("actor"), 2u);
  EXPECT_EQ(e.dictionary.predicate_id("director"), 3u);
}

TEST(Encode, FirstAppearanceWithoutPreferredOrder) {
  std::vector<RawTriple> raw = {{"b", "p", "a"}, {"c", "q", "b"}};
  auto e = encode(raw);
  EXPECT_EQ(e.dictionary.entity_id("b"), 0u);
  EXPECT_EQ(e.dictionary.entity_id("a"), 1u);
  EXPECT_EQ(e.dictionary.entity_id("c"), 2u);
  EXPECT_EQ(e.dictionary.predicate_id("q"), 2u);
}

TEST(Encode, Empty) {
  auto e = encode({});
  EXPECT_EQ(e.triples.n, 0u);
  EXPECT_TRUE(e.triples.triples.empty());
}

TEST(Encode, SelfLoopSingleEntity) {
  std::vector<RawTriple> raw = {{"a", "p", "a"}};
  auto e = encode(raw);
  EXPECT_EQ(e.triples.n, 1u);
  ASSERT_EQ(e.triples.triples.size(), 1u);
  EXPECT_EQ(e.triples.triples[0], (EncodedTriple{0, 0, 1}));
}

TEST(Encode, DuplicatesCollapsedAndRoundTrip) {
  std::vector<RawTriple> raw = {{"a", "p", "b"}, {"a", "p", "b"}, {"a", "q", "b"}};
  auto e = encode(raw);
  ASSERT_EQ(e.triples.triples.size(), 2u);
  for (const auto& t : e.triples.triples) {
    RawTriple back{e.dictionary.entity(t.row), e.dictionary.predicate(t.val), e.dictionary.entity(t.col)};
    EXPECT_NE(std::find(raw.begin(), raw.end(), back), raw.end());
  }
}

TEST(Terms, CanonicalAndDisplay) {
  EXPECT_EQ(canonical_term("<x>"), "x");
  EXPECT_EQ(canonical_term("\"l\""), "\"l\"");
  EXPECT_EQ(display_term("x"), "<x>");
  EXPECT_EQ(display_term("\"l\""), "\"l\"");
}

}  // namespace
}  // namespace matsparql
