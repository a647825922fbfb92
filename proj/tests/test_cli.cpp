#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "branched/cli.hpp"
#include "branched/errors.hpp"
#include "branched/selfsimilar.hpp"

using namespace branched;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = dispatch(c, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

RunConfig tree_config(int depth) {
  RunConfig c;
  c.command = Command::Tree;
  c.T = 0.25;
  c.depth = depth;
  return c;
}

}  // namespace

TEST(Config, RejectsInvalidParameters) {
  RunConfig c = tree_config(4);
  c.T = 0.2;
  EXPECT_THROW(validate_config(c), RegimeError);
  c = tree_config(kMaxMaterializedDepth + 1);
  EXPECT_THROW(validate_config(c), PreconditionError);
  c = tree_config(4);
  c.format = Format::Csv;
  EXPECT_THROW(validate_config(c), PreconditionError);
  RunConfig a;
  a.command = Command::Alpha;
  EXPECT_THROW(validate_config(a), PreconditionError);
  a.N = 7;
  EXPECT_THROW(validate_config(a), PreconditionError);
  RunConfig e;
  e.command = Command::Energy;
  e.mass_step = 0.3;
  EXPECT_THROW(validate_config(e), PreconditionError);
  RunConfig w;
  w.workers = 0;
  EXPECT_THROW(validate_config(w), PreconditionError);
  EXPECT_THROW(parse_format("xml"), PreconditionError);
  EXPECT_EQ(parse_format("md"), Format::Md);
}

TEST(Tree, ShortHorizonIsAUsageError) {
  RunConfig c = tree_config(4);
  c.T = 0.2;
  const Outcome r = run(c);
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("< 1/4"), std::string::npos);
}

TEST(Tree, SvgHasOneSegmentPerBranch) {
  RunConfig c = tree_config(6);
  c.format = Format::Svg;
  const Outcome r = run(c);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(count(r.out, "<line"), 126u);
}

TEST(Tree, JsonCarriesTheEnergy) {
  const Outcome r = run(tree_config(3));
  ASSERT_EQ(r.code, kExitOk);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["branches"].size(), 14u);
  const double total = doc["energy"]["total"].get<double>();
  const TruncatedEnergy a = mu_star_energy(3);
  EXPECT_NEAR(total, a.truncated.total, 1e-14);
  EXPECT_NEAR(total, a.limit, a.tail);
}

TEST(Tree, OutputIsByteDeterministic) {
  RunConfig c = tree_config(8);
  c.X = 0.3;
  c.T = 0.7;
  EXPECT_EQ(run(c).out, run(c).out);
  c.format = Format::Svg;
  EXPECT_EQ(run(c).out, run(c).out);
}

TEST(Alpha, AllRowsPass) {
  RunConfig c;
  c.command = Command::Alpha;
  c.all = true;
  const Outcome r = run(c);
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(count(r.out, "\n"), 5u);
  EXPECT_EQ(count(r.out, ",true\n"), 4u);
  EXPECT_EQ(r.out.rfind("N,grid_min,argmin,slack,certified_lower,threshold,verdict\n", 0), 0u);
}

TEST(Alpha, SixMatchesTable) {
  RunConfig c;
  c.command = Command::Alpha;
  c.N = 6;
  const Outcome r = run(c);
  ASSERT_EQ(r.code, kExitOk);
  const std::string row = r.out.substr(r.out.find('\n') + 1);
  EXPECT_NEAR(std::stod(row.substr(2)), 1.64, 0.01);
}

TEST(Alpha, CoarseDeltaFails) {
  RunConfig c;
  c.command = Command::Alpha;
  c.N = 3;
  c.delta = 1e-3;
  const Outcome r = run(c);
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_NE(r.out.find(",false\n"), std::string::npos);
}

TEST(Alpha, MarkdownAndWorkerIndependence) {
  RunConfig c;
  c.command = Command::Alpha;
  c.all = true;
  const std::string one = run(c).out;
  c.workers = 4;
  EXPECT_EQ(run(c).out, one);
  c.format = Format::Md;
  const Outcome md = run(c);
  EXPECT_EQ(count(md.out, "\n"), 6u);
  EXPECT_EQ(md.out.rfind("| N |", 0), 0u);
}

TEST(Energy, RowsAreSandwichedAndHitTheClosedForm) {
  RunConfig c;
  c.command = Command::Energy;
  c.mass_step = 0.05;
  c.t_max = 1.0;
  const Outcome r = run(c);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\n0.25,1.9571067811865475,"), std::string::npos);
  EXPECT_NE(r.out.find("\n0.5,2.2071067811865475,"), std::string::npos);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "T,E,lower,upper,exploratory");
  int rows = 0;
  while (std::getline(lines, line)) {
    double v[4];
    std::istringstream cells(line);
    std::string cell;
    for (double& x : v) {
      std::getline(cells, cell, ',');
      x = std::stod(cell);
    }
    EXPECT_LE(v[2], v[1]);
    EXPECT_LE(v[1], v[3] + 1e-12);
    ++rows;
  }
  EXPECT_GT(rows, 100);
  c.workers = 3;
  EXPECT_EQ(run(c).out, r.out);
}

TEST(Verify, VerdictsIndependentOfSeed) {
  RunConfig c;
  c.command = Command::Verify;
  c.format = Format::Json;
  c.seed = 42;
  const nlohmann::json a = nlohmann::json::parse(run(c).out);
  c.seed = 43;
  const Outcome r = run(c);
  const nlohmann::json b = nlohmann::json::parse(r.out);
  EXPECT_EQ(r.code, kExitOk);
  ASSERT_EQ(a["checks"].size(), b["checks"].size());
  for (std::size_t i = 0; i < a["checks"].size(); ++i) {
    EXPECT_EQ(a["checks"][i]["name"], b["checks"][i]["name"]);
    EXPECT_EQ(a["checks"][i]["pass"], b["checks"][i]["pass"]);
  }
  EXPECT_EQ(b["failed"].get<int>(), 0);
}
