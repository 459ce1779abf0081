#include <gtest/gtest.h>

#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "lattice_tda/io.hpp"
#include "support/test_support.hpp"

namespace ltda {
namespace {

using io::json;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lattice_tda");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = testing::scratch_dir(
        std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"persist", "--help"}).code, 0);
}

TEST_F(Cli, UnknownFlagIsAUsageError) {
  EXPECT_EQ(run({"persist", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, GenPersistScoreOnTheFiveByFiveSquare) {
  ASSERT_EQ(run({"gen", "--kind", "square", "--n", "5", "--out", path("sq.json")}).code, 0);
  const Result p = run({"persist", "--input", path("sq.json"), "--out", path("d.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const json d = json::parse(io::read_text_file(path("d.json")));
  EXPECT_EQ(d.at("h0").size(), 24u);
  EXPECT_EQ(d.at("h1").size(), 16u);
  const Result s = run({"score", "--input", path("d.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  const json j = json::parse(s.out);
  EXPECT_EQ(j.at("n"), 5);
  EXPECT_EQ(j.at("h0_bar").get<double>(), 0.0);
  EXPECT_NEAR(j.at("h1_bar").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j.at("summary"), "100.0% square, 0.0% hexagonal");
}

TEST_F(Cli, GenWritesCsvToStdout) {
  const Result g = run({"gen", "--kind", "square", "--n", "2"});
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.out, "x,y\n-1,-1\n1,-1\n-1,1\n1,1\n");
}

TEST_F(Cli, GenGridFromProcessParameters) {
  const Result g = run({"gen", "--kind", "grid", "--rows", "2", "--cols", "3", "--speed", "30000",
                     "--freq", "100", "--um-per-px", "0.5", "--out", path("g.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  const PointCloud c = io::load_cloud(path("g.json"));
  EXPECT_EQ(c.size(), 6u);
  EXPECT_EQ(c.unit(), Unit::pixels);
  EXPECT_EQ(c[2], (Point2{1200, 0}));
}

TEST_F(Cli, LowThresholdLeavesComponentsAndNoLoops) {
  ASSERT_EQ(run({"gen", "--n", "5", "--out", path("sq.csv")}).code, 0);
  const Result p = run({"persist", "--input", path("sq.csv"), "--threshold", "0.4"});
  ASSERT_EQ(p.code, 0) << p.err;
  const json d = json::parse(p.out);
  EXPECT_TRUE(d.at("h1").empty());
  EXPECT_TRUE(d.at("h0").empty());
  EXPECT_EQ(d.at("h0_infinite"), 25);
  EXPECT_NE(p.err.find("25 components"), std::string::npos) << p.err;
}

TEST_F(Cli, NegativeThreshold) {
  ASSERT_EQ(run({"gen", "--n", "3", "--out", path("sq.csv")}).code, 0);
  EXPECT_EQ(run({"persist", "--input", path("sq.csv"), "--threshold", "-1"}).code, 2);
}

TEST_F(Cli, SinglePointCloud) {
  io::write_text_file(path("one.csv"), "x,y\n0.5,0.5\n");
  const Result p = run({"persist", "--input", path("one.csv"), "--no-normalize",
                     "--out", path("d.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const json d = json::parse(io::read_text_file(path("d.json")));
  EXPECT_EQ(d.at("h0_infinite"), 1);
  EXPECT_TRUE(d.at("h1").empty());
  EXPECT_EQ(run({"score", "--input", path("d.json")}).code, 2);  // no n
  EXPECT_EQ(run({"score", "--input", path("d.json"), "--n", "2"}).code, 4);
}

TEST_F(Cli, NonSquareCountNeedsN) {
  io::write_text_file(path("six.csv"), "x,y\n0,0\n1,0\n2,0\n0,1\n1,1\n2,1.2\n");
  ASSERT_EQ(run({"persist", "--input", path("six.csv"), "--out", path("d.json")}).code, 0);
  const Result s = run({"score", "--input", path("d.json")});
  EXPECT_EQ(s.code, 2);
  EXPECT_NE(s.err.find("invalid-n"), std::string::npos) << s.err;
  EXPECT_EQ(run({"score", "--input", path("d.json"), "--n", "3"}).code, 0);
}

TEST_F(Cli, InputErrors) {
  io::write_text_file(path("bad.csv"), "x,y\n1,2\n3,oops\n");
  const Result r = run({"persist", "--input", path("bad.csv")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run({"persist", "--input", path("missing.csv")}).code, 3);
  EXPECT_EQ(run({"persist"}).code, 2);
}

TEST_F(Cli, DuplicatePointsAndDegenerateExtent) {
  io::write_text_file(path("dup.csv"), "x,y\n0,0\n1,1\n0,0\n");
  EXPECT_EQ(run({"persist", "--input", path("dup.csv")}).code, 4);
  EXPECT_EQ(run({"persist", "--input", path("dup.csv"), "--no-normalize"}).code, 4);
  io::write_text_file(path("line.csv"), "x,y\n0,0\n0,1\n0,2\n");
  EXPECT_EQ(run({"persist", "--input", path("line.csv")}).code, 4);
}

TEST_F(Cli, ScoreCsvAndBatch) {
  fs::create_directories(dir / "batch");
  for (int n : {3, 4}) {
    const std::string cloud = path("sq" + std::to_string(n) + ".json");
    ASSERT_EQ(run({"gen", "--n", std::to_string(n), "--out", cloud}).code, 0);
    ASSERT_EQ(run({"persist", "--input", cloud, "--out",
                   (dir / "batch" / ("d" + std::to_string(n) + ".json")).string()})
                  .code,
              0);
  }
  const Result b = run({"score", "--batch", path("batch"), "--format", "csv"});
  ASSERT_EQ(b.code, 0) << b.err;
  std::istringstream lines(b.out);
  std::string header, row3, row4;
  std::getline(lines, header);
  std::getline(lines, row3);
  std::getline(lines, row4);
  EXPECT_EQ(header, "file," + io::score_csv_header());
  EXPECT_EQ(row3.rfind("d3.json,3,", 0), 0u) << row3;
  EXPECT_EQ(row4.rfind("d4.json,4,", 0), 0u) << row4;
  EXPECT_EQ(run({"score", "--input", path("batch/d3.json"), "--format", "xml"}).code, 2);
}

TEST_F(Cli, EpsilonFlagsChangeTheReading) {
  ASSERT_EQ(run({"gen", "--n", "5", "--perturb", "0.05", "--seed", "1", "--out", path("p.json")}).code, 0);
  ASSERT_EQ(run({"persist", "--input", path("p.json"), "--out", path("d.json")}).code, 0);
  const json strict = json::parse(
      run({"score", "--input", path("d.json"), "--epsilon-square", "1e-6"}).out);
  EXPECT_EQ(strict.at("category"), "neither square nor hexagonal");
  EXPECT_TRUE(strict.at("percent_square").is_null());
}

TEST_F(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  ASSERT_EQ(run({"gen", "--n", "5", "--out", path("sq.csv")}).code, 0);
  io::write_text_file(path("cfg.json"), R"({"persist": {"threshold": 0.4}})");
  const json a = json::parse(
      run({"--config", path("cfg.json"), "persist", "--input", path("sq.csv")}).out);
  EXPECT_EQ(a.at("threshold").get<double>(), 0.4);
  const json b = json::parse(run({"--config", path("cfg.json"), "persist", "--input",
                                  path("sq.csv"), "--threshold", "0.6"})
                                 .out);
  EXPECT_EQ(b.at("threshold").get<double>(), 0.6);
  io::write_text_file(path("bad.json"), "{not json");
  EXPECT_EQ(run({"--config", path("bad.json"), "persist", "--input", path("sq.csv")}).code, 3);
}

TEST_F(Cli, PersistIsDeterministic) {
  ASSERT_EQ(run({"gen", "--n", "8", "--perturb", "0.03", "--seed", "9", "--out", path("c.csv")}).code, 0);
  ASSERT_EQ(run({"persist", "--input", path("c.csv"), "--svg", path("a.svg"), "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"persist", "--input", path("c.csv"), "--svg", path("b.svg"), "--out", path("b.json")}).code, 0);
  EXPECT_EQ(io::read_text_file(path("a.json")), io::read_text_file(path("b.json")));
  EXPECT_EQ(io::read_text_file(path("a.svg")), io::read_text_file(path("b.svg")));
  EXPECT_EQ(io::read_text_file(path("a.svg")).rfind("<svg", 0), 0u);
}

class CliImage : public Cli {
 protected:
  void SetUp() override {
    Cli::SetUp();
    const auto fx = testing::render_disk_grid(300, 300, 3, 3, {60.3, 70.6}, 80, 25, 40, 200, 1.0);
    truth = fx.centers;
    io::write_text_file(path("img.pgm"), io::encode_pgm(fx.image));
    std::string seeds = "x,y\n";
    for (const auto& c : truth) seeds += fmt::format("{},{}\n", std::round(c.x), std::round(c.y));
    io::write_text_file(path("seeds.csv"), seeds);
    io::write_text_file(
        path("nominal.json"),
        R"({"rows":3,"cols":3,"pitch_x":80,"pitch_y":80,"datum":[60,70]})");
  }
  std::vector<Point2> truth;
};

TEST_F(CliImage, ExtractFindsEveryCenter) {
  const Result e = run({"extract", "--image", path("img.pgm"), "--seeds", path("seeds.csv")});
  ASSERT_EQ(e.code, 0) << e.err;
  const PointCloud c = io::parse_cloud_csv(e.out, Unit::pixels);
  ASSERT_EQ(c.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_LE(std::hypot(c[i].x - truth[i].x, c[i].y - truth[i].y), 1.0);
  }
}

TEST_F(CliImage, ExtractInputErrors) {
  io::write_text_file(path("bad_seeds.csv"), "x,y\n10,ten\n");
  const Result bad = run({"extract", "--image", path("img.pgm"), "--seeds", path("bad_seeds.csv")});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
  io::write_text_file(path("far.csv"), "x,y\n1000,5\n");
  EXPECT_EQ(run({"extract", "--image", path("img.pgm"), "--seeds", path("far.csv")}).code, 3);
  EXPECT_EQ(run({"extract", "--image", path("img.pgm")}).code, 2);
  EXPECT_EQ(run({"extract", "--image", path("img.pgm"), "--seeds", path("seeds.csv"),
                 "--auto-seeds", path("seeds.csv")})
                .code,
            2);
}

TEST_F(CliImage, AutoSeedsFromTheNominalGrid) {
  ASSERT_EQ(run({"gen", "--kind", "grid", "--rows", "3", "--cols", "3", "--pitch-x", "80",
                 "--datum-x", "60", "--datum-y", "70", "--out", path("nom.csv")})
                .code,
            0);
  const Result e = run({"extract", "--image", path("img.pgm"), "--auto-seeds", path("nom.csv")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(io::parse_cloud_csv(e.out).size(), 9u);
}

TEST_F(CliImage, MatchAgainstTheNominalSpec) {
  ASSERT_EQ(run({"extract", "--image", path("img.pgm"), "--seeds", path("seeds.csv"),
                 "--out", path("centers.csv")})
                .code,
            0);
  const Result m = run({"match", "--nominal", path("nominal.json"), "--true", path("centers.csv")});
  ASSERT_EQ(m.code, 0) << m.err;
  const json j = json::parse(m.out);
  EXPECT_EQ(j.at("matched").size(), 9u);
  EXPECT_TRUE(j.at("missed").empty());
  for (const auto& p : j.at("matched")) {
    EXPECT_NEAR(p.at("dx").get<double>(), 0.3, 1.0);
    EXPECT_NEAR(p.at("dy").get<double>(), 0.6, 1.0);
  }
  EXPECT_EQ(run({"match", "--nominal", path("nominal.json"), "--true", path("centers.csv"),
                 "--unit", "micrometers"})
                .code,
            3);  // spec grid is in pixels
}

TEST_F(CliImage, PipelineEqualsTheManualChain) {
  const Result p = run({"pipeline", "--image", path("img.pgm"), "--seeds", path("seeds.csv"),
                     "--nominal", path("nominal.json"), "--out-dir", path("bundle")});
  ASSERT_EQ(p.code, 0) << p.err;
  for (const char* f : {"centers.csv", "match.json", "diagram.json", "diagram.svg", "scores.json"}) {
    EXPECT_TRUE(fs::exists(dir / "bundle" / f)) << f;
  }
  EXPECT_EQ(p.out, io::read_text_file(path("bundle/scores.json")));

  ASSERT_EQ(run({"extract", "--image", path("img.pgm"), "--seeds", path("seeds.csv"),
                 "--out", path("c.csv")})
                .code,
            0);
  ASSERT_EQ(run({"persist", "--input", path("c.csv"), "--out", path("d.json"), "--svg",
                 path("d.svg")})
                .code,
            0);
  ASSERT_EQ(run({"score", "--input", path("d.json"), "--out", path("s.json")}).code, 0);
  ASSERT_EQ(run({"match", "--nominal", path("nominal.json"), "--true", path("c.csv"),
                 "--out", path("m.json")})
                .code,
            0);
  EXPECT_EQ(io::read_text_file(path("c.csv")), io::read_text_file(path("bundle/centers.csv")));
  EXPECT_EQ(io::read_text_file(path("d.json")), io::read_text_file(path("bundle/diagram.json")));
  EXPECT_EQ(io::read_text_file(path("d.svg")), io::read_text_file(path("bundle/diagram.svg")));
  EXPECT_EQ(io::read_text_file(path("s.json")), io::read_text_file(path("bundle/scores.json")));
  EXPECT_EQ(io::read_text_file(path("m.json")), io::read_text_file(path("bundle/match.json")));

  const json s = json::parse(p.out);
  EXPECT_NEAR(s.at("h1_bar").get<double>(), 1.0, 0.02);
}

TEST_F(Cli, PipelineFromACloud) {
  ASSERT_EQ(run({"gen", "--n", "4", "--out", path("sq.csv")}).code, 0);
  const Result p = run({"pipeline", "--cloud", path("sq.csv"), "--out-dir", path("bundle")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_FALSE(fs::exists(dir / "bundle" / "centers.csv"));
  EXPECT_NEAR(json::parse(p.out).at("h1_bar").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(run({"pipeline", "--out-dir", path("bundle")}).code, 2);
}

}  // namespace
}  // namespace ltda
