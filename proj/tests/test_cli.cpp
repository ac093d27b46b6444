#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "generators.hpp"
#include "twinlim/serialize.hpp"

using namespace twinlim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(TWINLIM_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("twinlim_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", fixture("cycles.json")}).code, 0);
  Outcome bad = run({"validate", fixture("ds3_counterexample.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("DS3 level 2: FAIL (a,b,a',b')"), std::string::npos) << bad.out;
  Outcome malformed = run({"validate", fixture("malformed.json")});
  EXPECT_EQ(malformed.code, 2);
  EXPECT_NE(malformed.err.find("parse error"), std::string::npos);
  EXPECT_EQ(run({"validate", path("missing.json")}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 4);
  EXPECT_EQ(run({"frobnicate"}).code, 4);
  EXPECT_EQ(run({"encode", fixture("swap.sys")}).code, 4);  // --depth missing
  EXPECT_EQ(run({"validate", fixture("cycles.json"), "--format", "xml"}).code, 4);
  EXPECT_EQ(run({"encode", fixture("tent.sys"), "--depth", "1", "--mode", "zero-dim"}).code, 4);
}

TEST_F(CliTest, BadSpecIsParseError) {
  EXPECT_EQ(run({"encode", fixture("bad_metric.sys"), "--depth", "1"}).code, 2);
}

TEST_F(CliTest, RefinementCapExit) {
  Outcome r = run({"encode", fixture("tent.sys"), "--depth", "2", "--max-attempts", "1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("refinement cap"), std::string::npos);
}

TEST_F(CliTest, EncodeSwapReportsLevels) {
  Outcome r = run({"encode", fixture("swap.sys"), "--depth", "3", "--out", path("swap.json"), "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.rfind("twinlim " TWINLIM_VERSION " seed=7", 0), 0u);
  EXPECT_NE(r.out.find("level 3: sets 2, vertices 2"), std::string::npos) << r.out;
  auto enc = std::get<AnyEncoding>(load_document(path("swap.json")));
  const auto& fin = std::get<Encoding<FiniteSystem>>(enc);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_EQ(quotient_at_depth(fin.twinned, n).size(), 2u);
}

TEST_F(CliTest, EncodeFixedPoint) {
  Outcome r = run({"encode", fixture("fixed.sys"), "--depth", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  for (const auto& lvl : j["levels"]) EXPECT_EQ(lvl["vertices"], 1);
  EXPECT_EQ(j["tool"]["seed"], 1);
}

TEST_F(CliTest, EncodeZeroDimFullShift) {
  Outcome r = run({"encode", fixture("full2.sys"), "--depth", "5", "--mode", "zero-dim", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["levels"][5]["vertices"], 32);
  EXPECT_EQ(j["levels"][5]["edges"], 64);
}

TEST_F(CliTest, SimulateSwap) {
  ASSERT_EQ(run({"encode", fixture("swap.sys"), "--depth", "3", "--out", path("swap.json")}).code, 0);
  Outcome r = run({"simulate", path("swap.json"), "--steps", "2", "--start-point", "p"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> encl;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);)
    if (auto k = line.find("enclosure "); k != std::string::npos) encl.push_back(line.substr(k + 10, 3));
  EXPECT_EQ(encl, (std::vector<std::string>{"{p}", "{q}", "{p}"})) << r.out;
}

TEST_F(CliTest, SimulateFixedPointIsConstant) {
  ASSERT_EQ(run({"encode", fixture("fixed.sys"), "--depth", "3", "--out", path("fixed.json")}).code, 0);
  Outcome r = run({"simulate", path("fixed.json"), "--steps", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["trajectory"].size(), 4u);
  for (const auto& s : j["trajectory"]) EXPECT_EQ(s["enclosure"], j["trajectory"][0]["enclosure"]);
}

TEST_F(CliTest, SimulateTentFollowsOrbit) {
  ASSERT_EQ(run({"encode", fixture("tent.sys"), "--depth", "3", "--out", path("tent.json")}).code, 0);
  Outcome r = run({"simulate", path("tent.json"), "--steps", "3", "--start-point", "2/5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["trajectory"].size(), 4u);
  const std::vector<Rational> orbit{gen::frac(2, 5), gen::frac(4, 5), gen::frac(2, 5), gen::frac(4, 5)};
  for (std::size_t k = 0; k < 4; ++k) {
    std::string e = j["trajectory"][k]["enclosure"];
    // enclosures are written as one closed interval "[a, b]"
    auto comma = e.find(',');
    ASSERT_EQ(e.front(), '[') << e;
    Rational lo = parse_rational(e.substr(1, comma - 1));
    Rational hi = parse_rational(e.substr(comma + 2, e.size() - comma - 3));
    EXPECT_LE(lo, orbit[k]) << e;
    EXPECT_GE(hi, orbit[k]) << e;
  }
}

TEST_F(CliTest, SimulateTooManySteps) {
  ASSERT_EQ(run({"encode", fixture("swap.sys"), "--depth", "2", "--out", path("swap.json")}).code, 0);
  EXPECT_EQ(run({"simulate", path("swap.json"), "--steps", "3"}).code, 4);
  EXPECT_EQ(run({"simulate", path("swap.json"), "--steps", "1", "--start-point", "p", "--start-vertex", "x"}).code, 4);
}

TEST_F(CliTest, ExportLevelZero) {
  ASSERT_EQ(run({"encode", fixture("swap.sys"), "--depth", "2", "--out", path("swap.json")}).code, 0);
  Outcome r = run({"export", path("swap.json"), "--level", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"root\" -> \"root\";"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"root\" -> \"root\" [style=dashed, dir=none];"), std::string::npos);
  EXPECT_EQ(run({"export", path("swap.json"), "--level", "9"}).code, 4);
}

TEST_F(CliTest, ExportDeBruijnDot) {
  ASSERT_EQ(run({"encode", fixture("full2.sys"), "--depth", "3", "--mode", "zero-dim", "--out", path("z.json")}).code, 0);
  Outcome r = run({"export", path("z.json"), "--level", "3", "--out", path("z.dot")});
  ASSERT_EQ(r.code, 0);
  std::string dot = slurp(path("z.dot"));
  std::size_t nodes = 0, arrows = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find("->") != std::string::npos) ++arrows;
    else if (line.find("\";") != std::string::npos) ++nodes;
  }
  EXPECT_EQ(nodes, 8u);
  EXPECT_EQ(arrows, 16u);
}

TEST_F(CliTest, ExportJsonRoundTripsAndIsStable) {
  ASSERT_EQ(run({"encode", fixture("golden.sys"), "--depth", "3", "--out", path("g.json")}).code, 0);
  ASSERT_EQ(run({"export", path("g.json"), "--level", "3", "--format", "json", "--out", path("slice.json")}).code, 0);
  EXPECT_EQ(run({"validate", path("slice.json")}).code, 0);
  ASSERT_EQ(run({"export", path("slice.json"), "--level", "3", "--format", "json", "--out", path("again.json")}).code, 0);
  EXPECT_EQ(slurp(path("slice.json")), slurp(path("again.json")));
}

TEST_F(CliTest, CheckPassesOnBundles) {
  for (const char* spec : {"swap.sys", "golden.sys", "tent.sys"}) {
    ASSERT_EQ(run({"encode", fixture(spec), "--depth", "2", "--out", path("b.json")}).code, 0);
    Outcome r = run({"check", path("b.json"), "--seed", "3", "--samples", "5"});
    EXPECT_EQ(r.code, 0) << spec << "\n" << r.out;
    EXPECT_NE(r.out.find("seed=3 samples=5"), std::string::npos);
  }
  ASSERT_EQ(run({"encode", fixture("golden.sys"), "--depth", "4", "--mode", "zero-dim", "--out", path("z.json")}).code, 0);
  EXPECT_EQ(run({"check", path("z.json")}).code, 0);
}

TEST_F(CliTest, CheckCatchesTamperedEdge) {
  // shift cylinders never meet after fattening, so the golden bundle is tampered on G instead
  for (auto [spec, which] : {std::pair{"tent.sys", "f_levels"}, std::pair{"golden.sys", "g_levels"}}) {
    ASSERT_EQ(run({"encode", fixture(spec), "--depth", "2", "--out", path("b.json")}).code, 0);
    auto j = nlohmann::json::parse(slurp(path("b.json")));
    auto& edges = j["twinned"][which][2]["edges"];
    const std::size_t before = edges.size();
    // drop one edge between distinct vertices
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k][0] != edges[k][1]) {
        edges.erase(edges.begin() + static_cast<long>(k));
        break;
      }
    ASSERT_EQ(edges.size() + 1, before) << spec;
    std::ofstream(path("t.json")) << j.dump();
    Outcome r = run({"check", path("t.json")});
    EXPECT_EQ(r.code, 1) << spec;
    EXPECT_NE(r.out.find("construction: FAIL"), std::string::npos) << r.out;
  }
}

TEST_F(CliTest, VersionAndHelp) {
  Outcome v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(TWINLIM_VERSION), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}
