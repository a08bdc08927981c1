#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace matsparql {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = testing::data_path("movies.nt");
const std::string kQuery = testing::data_path("crew.rq");
const std::string kConst = testing::data_path("crew_const.rq");

TEST(Cli, QueryMatchesOracleByteForByte) {
  for (const std::string trav : {"direction", "degree", "auto"}) {
    const auto q = run({"query", kData, "--query-file", kQuery, "--traversal", trav, "--np", "2", "--nt", "2"});
    const auto o = run({"oracle", kData, "--query-file", kQuery});
    ASSERT_EQ(q.code, 0) << q.err;
    EXPECT_EQ(q.out, o.out);
  }
  EXPECT_EQ(run({"oracle", kData, "--query-file", kQuery}).out,
            "v0,v1,v2,v3\n<Product0>,<User0>,<User1>,<User0>\n<Product0>,<User0>,<User1>,<User4>\n");
}

TEST(Cli, DirectionWithConstantsIsRefused) {
  const auto r = run({"query", kData, "--query-file", kConst, "--traversal", "direction"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("direction"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, CsvQuoting) {
  const auto dir = std::filesystem::temp_directory_path() / "matsparql_cli_quote";
  std::filesystem::create_directories(dir);
  const auto nt = (dir / "d.nt").string();
  std::ofstream(nt) << "<a> <p> \"x, \\\"y\\\"\" .\n";
  const auto r = run({"query", nt, "--query", "SELECT ?o { <a> <p> ?o }"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "o\n\"\"\"x, \\\"\"y\\\"\"\"\"\"\n");
}

TEST(Cli, JsonFormatAndStats) {
  const auto r = run({"query", kData, "--query-file", kQuery, "--format", "json", "--stats"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["v3"], "<User0>");
  for (const char* key : {"light_evaluation_ms", "host_to_device_ms", "main_computation_ms", "device_to_host_ms",
                          "post_processing_ms", "misses 0"}) {
    EXPECT_NE(r.err.find(key), std::string::npos) << key;
  }
}

TEST(Cli, PlanJson) {
  const auto r = run({"plan", "--query-file", kQuery, "--traversal", "direction", "--dump-graph"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["roots"], nlohmann::json({"?v0", "?v3"}));
  EXPECT_EQ(j["post_processing"], "local_then_global");
  EXPECT_EQ(j["graph"]["edges"].size(), 4u);
}

TEST(Cli, PartitionJson) {
  const auto r = run({"partition", kData, "--query-file", kQuery, "--np", "2", "--nt", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["nodes"].size(), 2u);
  EXPECT_EQ(j["nodes"][0]["workers"].size(), 2u);
}

TEST(Cli, CacheRebuildsWhenStale) {
  const auto dir = std::filesystem::temp_directory_path() / "matsparql_cli_cache";
  std::filesystem::create_directories(dir);
  const auto nt = (dir / "d.nt").string();
  const auto cache = (dir / "d.cache").string();
  std::filesystem::remove(cache);
  std::filesystem::copy_file(kData, nt, std::filesystem::copy_options::overwrite_existing);

  auto first = run({"load", nt, "--cache", cache});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_FALSE(nlohmann::json::parse(first.out)["from_cache"].get<bool>());
  auto second = run({"load", nt, "--cache", cache});
  EXPECT_TRUE(nlohmann::json::parse(second.out)["from_cache"].get<bool>());

  std::ofstream(nt, std::ios::app) << "<User9> <follows> <User0> .\n";
  auto third = run({"load", nt, "--cache", cache});
  EXPECT_FALSE(nlohmann::json::parse(third.out)["from_cache"].get<bool>());
  EXPECT_NE(third.err.find("stale"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(third.out)["triples"], 13);

  const auto q1 = run({"query", nt, "--query-file", kQuery, "--cache", cache + ".q"});
  const auto q2 = run({"query", nt, "--query-file", kQuery, "--cache", cache + ".q"});
  EXPECT_EQ(q1.out, q2.out);
}

TEST(Cli, BenchEmitsPhaseColumns) {
  const auto r = run({"bench", kData, "--query-file", kQuery, "--query-file", kConst, "--configs", "1x1,2x2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  for (const char* col : {"light_evaluation_ms", "lspm_ms", "partition_ms", "host_to_device_ms", "main_computation_ms",
                          "device_to_host_ms", "post_processing_ms"}) {
    EXPECT_NE(header.find(col), std::string::npos) << col;
  }
  EXPECT_NE(r.out.find("crew_const,direction,1,1,refused"), std::string::npos);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 8u);
}

TEST(Cli, ErrorsAreReported) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"query", kData}).code, 0);
  const auto bad = run({"query", kData, "--query", "SELECT * { ?a <p> }"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos);
  EXPECT_NE(run({"query", kData, "--query-file", kQuery, "--traversal", "sideways"}).code, 0);
}

TEST(Cli, EntityOrderAffectsOnlyIds) {
  const auto a = run({"query", kData, "--query-file", kQuery});
  const auto b = run({"query", kData, "--query-file", kQuery, "--entity-order", testing::data_path("movies.order")});
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace matsparql
