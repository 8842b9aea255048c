#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "locsketch/locsketch.hpp"

using namespace locsketch;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "locsketch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("locsketch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::string write_sketch(const std::string& name, const LocationalSketch& s) const {
    write_bytes_atomic(path(name), serialize(s));
    return path(name);
  }

  fs::path dir_;
};

std::string field(const std::string& csv_row, std::size_t index) {
  std::stringstream ss(csv_row);
  std::string cell;
  for (std::size_t i = 0; i <= index; ++i) std::getline(ss, cell, ',');
  return cell;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_F(CliTest, SketchWritesThirtyThreeBytes) {
  const auto in = write_text("x.txt", "01101001\n");
  const CliResult r = run_cli({"sketch", "--in", in, "--out", path("x.lsk"), "--u", "8", "--v", "8", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fs::file_size(path("x.lsk")), 33U);
  EXPECT_NE(r.err.find("n=8 u=8 v=8 B=64"), std::string::npos);

  run_cli({"sketch", "--in", in, "--out", path("y.lsk"), "--u", "8", "--v", "8", "--seed", "3"});
  EXPECT_EQ(read_bytes(path("x.lsk")), read_bytes(path("y.lsk")));
  EXPECT_EQ(run_cli({"--quiet", "sketch", "--in", in, "--out", path("z.lsk")}).err, "");
}

TEST_F(CliTest, SketchReportsBadCharacterOffset) {
  const auto in = write_text("bad.txt", "0101x1\n");
  const CliResult r = run_cli({"sketch", "--in", in, "--out", path("bad.lsk")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 4"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("bad.lsk")));
  EXPECT_EQ(run_cli({"sketch", "--in", path("missing.txt"), "--out", path("m.lsk")}).code, 2);
}

TEST_F(CliTest, SketchRejectsBadParams) {
  const auto in = write_text("x.txt", "0110");
  const CliResult r = run_cli({"sketch", "--in", in, "--out", path("x.lsk"), "--v", "40"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({"sketch", "--in", in}).code, 1);
  EXPECT_EQ(run_cli({"nonsense"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST_F(CliTest, EstimateIdenticalPrintsOne) {
  const auto in = write_text("x.txt", BitSequence::random(2000, 4).to_string());
  run_cli({"sketch", "--in", in, "--out", path("a.lsk"), "--u", "16", "--v", "10"});
  const CliResult r = run_cli({"estimate", path("a.lsk"), path("a.lsk"), "--theta0", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n");
}

TEST_F(CliTest, EstimateMismatchedSeedsFails) {
  const auto in = write_text("x.txt", BitSequence::random(500, 4).to_string());
  run_cli({"sketch", "--in", in, "--out", path("a.lsk"), "--seed", "1"});
  run_cli({"sketch", "--in", in, "--out", path("b.lsk"), "--seed", "2"});
  const CliResult r = run_cli({"estimate", path("a.lsk"), path("b.lsk"), "--theta0", "0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, EstimateModeExample) {
  const SketchParams p{8, 8, 1, 1 << 14};
  const auto a = write_sketch("a.lsk", {p, {200, 180, 150, 10, 240, 99, 160, 7}});
  const auto b = write_sketch("b.lsk", {p, {53, 33, 3, 200, 17, 0, 100, 90}});
  const CliResult r = run_cli({"estimate", a, b, "--theta0", "0.5", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2U);
  EXPECT_EQ(ls[0], "0.42578125");
  const auto j = nlohmann::json::parse(ls[1]);
  EXPECT_EQ(j["mode"], 147);
  EXPECT_EQ(j["count"], 3);
  EXPECT_EQ(j["abstained"], false);
}

TEST_F(CliTest, EstimateRequiresTheta0AndValidRange) {
  const auto a = write_sketch("a.lsk", {SketchParams{1, 4, 0, 10}, {3}});
  EXPECT_EQ(run_cli({"estimate", a, a}).code, 1);
  EXPECT_EQ(run_cli({"estimate", a, a, "--theta0", "1.5"}).code, 1);
  write_text("junk.lsk", "LSK1");
  EXPECT_EQ(run_cli({"estimate", a, path("junk.lsk"), "--theta0", "0.5"}).code, 2);
}

TEST_F(CliTest, AllPairsRowsAndSelfPair) {
  fs::create_directories(path("d"));
  const auto x = BitSequence::random(1000, 1).to_string();
  write_text("d/a.txt", x);
  write_text("d/b.txt", BitSequence::random(1000, 2).to_string());
  write_text("d/c.txt", BitSequence::random(1000, 3).to_string());
  for (const char* name : {"a", "b", "c"}) {
    ASSERT_EQ(run_cli({"sketch", "--in", path(std::string("d/") + name + ".txt"), "--out",
                       path(std::string("d/") + name + ".lsk"), "--u", "32", "--v", "10"})
                  .code,
              0);
  }
  CliResult r = run_cli({"allpairs", "--dir", path("d"), "--theta0", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4U);
  EXPECT_EQ(ls[0], "file_i,file_j,theta_hat");
  EXPECT_EQ(field(ls[1], 0), "a.lsk");
  EXPECT_EQ(field(ls[1], 1), "b.lsk");
  EXPECT_EQ(field(ls[3], 0), "b.lsk");

  fs::copy_file(path("d/a.lsk"), path("d/a2.lsk"));
  r = run_cli({"allpairs", "--dir", path("d"), "--theta0", "0.5", "--out", path("pairs.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  std::ifstream f(path("pairs.csv"));
  std::stringstream buf;
  buf << f.rdbuf();
  ls = lines(buf.str());
  ASSERT_EQ(ls.size(), 7U);
  EXPECT_EQ(ls[1], "a.lsk,a2.lsk,1");
}

TEST_F(CliTest, AllPairsListsIncompatibleFiles) {
  fs::create_directories(path("d"));
  write_sketch("d/a.lsk", {SketchParams{2, 4, 0, 10}, {1, 2}});
  write_sketch("d/b.lsk", {SketchParams{2, 4, 1, 10}, {1, 2}});
  write_sketch("d/c.lsk", {SketchParams{2, 5, 0, 10}, {1, 2}});
  write_sketch("d/d.lsk", {SketchParams{2, 4, 0, 10}, {1, 2}});
  const CliResult r = run_cli({"allpairs", "--dir", path("d"), "--theta0", "0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("b.lsk (seed)"), std::string::npos);
  EXPECT_NE(r.err.find("c.lsk (v)"), std::string::npos);
  EXPECT_EQ(r.err.find("d.lsk ("), std::string::npos);
}

TEST_F(CliTest, AllPairsFiftySketchesUnderOneSecond) {
  fs::create_directories(path("d"));
  const OrderingSet set = make_orderings(9, 64, 4096);
  for (int i = 0; i < 50; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "d/s%02d.lsk", i);
    write_sketch(name, make_sketch(BitSequence::random(4096, 100 + i), set, 12));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CliResult r = run_cli({"allpairs", "--dir", path("d"), "--theta0", "0.5"});
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 1U + 50U * 49U / 2U);
  EXPECT_LT(dt.count(), 1.0);
}

TEST_F(CliTest, BaselineRoundTrip) {
  const auto in = write_text("x.txt", BitSequence::random(3000, 4).to_string());
  CliResult r = run_cli({"baseline", "sketch", "--in", in, "--out", path("a.mhs"), "--H", "8", "--b", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fs::file_size(path("a.mhs")), kMhsHeaderBytes + 8 * 2);
  EXPECT_NE(r.err.find("k=35"), std::string::npos);
  r = run_cli({"baseline", "estimate", path("a.mhs"), path("a.mhs"), "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out)[0], "1");
  EXPECT_EQ(run_cli({"baseline"}).code, 1);
  EXPECT_EQ(run_cli({"baseline", "sketch", "--in", in, "--out", path("b.mhs"), "--b", "0"}).code, 1);
}

TEST_F(CliTest, BoundsPrintsLowerColumn) {
  const CliResult r = run_cli({"bounds", "--theta0", "0.5", "--B", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2U);
  EXPECT_EQ(ls[0], "B,u,v,upper_uv,upper_theorem,lower_converse,noisy_theorem");
  EXPECT_EQ(field(ls[1], 5), "0.001953125");
  EXPECT_EQ(run_cli({"bounds", "--theta0", "0.5", "--variant", "other"}).code, 1);
  EXPECT_EQ(run_cli({"bounds", "--theta0", "0"}).code, 1);
  const CliResult j = run_cli({"bounds", "--theta0", "0.5", "--json"});
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 25U);
}

TEST_F(CliTest, SimulateFullOverlapHasZeroMse) {
  const CliResult r = run_cli({"simulate", "--theta", "1", "--trials", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2U);
  EXPECT_EQ(field(ls[0], 9), "mse");
  EXPECT_EQ(field(ls[1], 9), "0");
}

TEST_F(CliTest, SimulateIsByteReproducible) {
  const std::vector<std::string> args{"simulate", "--n", "2048", "--theta", "0,0.6", "--u", "16", "--v", "10",
                                      "--trials", "8", "--seed", "5", "--records"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 17U);
}

TEST_F(CliTest, SimulateRejectsInvalidCombinations) {
  EXPECT_EQ(run_cli({"simulate", "--scheme", "both"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--B", "256"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--scheme", "minhash", "--u", "8"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--H", "8"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--sweep"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--sweep", "--B", "256", "--u", "8"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--theta", "2"}).code, 1);
  const CliResult r = run_cli({"simulate", "--scheme", "nope"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SimulateSweepAndMinHash) {
  CliResult r = run_cli({"simulate", "--sweep", "--B", "256", "--n", "2048", "--theta", "1", "--trials", "3", "--scheme",
                   "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3U);
  EXPECT_EQ(field(ls[1], 0), "locational");
  EXPECT_EQ(field(ls[2], 0), "minhash");
  r = run_cli({"simulate", "--scheme", "minhash", "--n", "2048", "--theta", "1", "--trials", "3", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::accept(r.out));
}

TEST_F(CliTest, VerifyRepeatWithinBound) {
  const CliResult r = run_cli({"verify", "repeat", "--n", "1024", "--trials", "10000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2U);
  const auto head = ls[0];
  std::size_t col = 0;
  for (std::size_t i = 0; field(head, i) != "within_bound"; ++i) col = i + 1;
  EXPECT_EQ(field(ls[1], col), "1");
}

TEST_F(CliTest, VerifyLemmaPmfAndBinsRun) {
  CliResult r = run_cli({"verify", "lemma-pmf", "--n", "1024", "--theta", "1", "--v", "6", "--trials", "20", "--pmf"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 1U + 127U);
  EXPECT_NE(r.out.find("\n0,1,1\n"), std::string::npos);
  r = run_cli({"verify", "bins", "--u", "4", "--v", "8", "--n", "1024", "--trials", "10", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["F_histogram"].size(), 5U);
  EXPECT_EQ(run_cli({"verify"}).code, 1);
  EXPECT_EQ(run_cli({"verify", "lemma-pmf", "--v", "30"}).code, 1);
  EXPECT_EQ(run_cli({"verify", "bins", "--theta0", "1"}).code, 1);
}

TEST_F(CliTest, OutputFileWrittenAtomically) {
  const CliResult r = run_cli({"bounds", "--theta0", "0.5", "--B", "16,32", "--out", path("b.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(path("b.csv")));
  for (const auto& e : fs::directory_iterator(dir_)) EXPECT_EQ(e.path().extension(), ".csv");
  EXPECT_EQ(run_cli({"bounds", "--theta0", "0.5", "--out", path("no/such/dir.csv")}).code, 2);
}
