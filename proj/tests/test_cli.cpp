#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dnaobf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dnaobf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  std::string corpus(std::size_t families = 4, std::size_t copies = 3) const {
    const auto r = run({"synth", "--seed", "5", "--families", std::to_string(families),
                        "--copies_per_family", std::to_string(copies), "--length", "150",
                        "--substitution_rate", "0.02", "-o", path("corpus.fasta")});
    EXPECT_EQ(r.code, 0) << r.err;
    return path("corpus.fasta");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DistanceReproducesWorkedExample) {
  const auto a = write("a.fasta", ">x\nCCTGTAAA\n");
  const auto b = write("b.fasta", ">y\nCA-GTRAA\n");
  const auto r = run({"distance", a, b});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "aligned_a\tCCTGTAAA\naligned_b\tCA-GTRAA\nobfuscated\tCMNGTRAA\ndistance\t7\n"
            "loss_a\t5\nloss_b\t2\n");
}

TEST_F(CliTest, DistanceAlignsRawInputs) {
  const auto a = write("a.fasta", ">x\nACGTACGTTT\n");
  const auto b = write("b.fasta", ">y\nACGTACGT\n");
  const auto r = run({"distance", a, b});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("score\t8\n"), std::string::npos);
  EXPECT_NE(r.out.find("distance\t8\n"), std::string::npos);
}

TEST_F(CliTest, ObfuscateHappyPath) {
  const auto in = corpus();
  const auto r = run({"obfuscate", "--method", "itermegablast", "--seed", "7", in, "-o",
                      path("out.fasta"), "--report", path("report.json"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto fasta = dnaobf::read_fasta_file(path("out.fasta"));
  EXPECT_EQ(fasta.size(), 6u);
  EXPECT_NE(fasta[0].id.find('+'), std::string::npos);
  const auto report = dnaobf::Json::parse(slurp(path("report.json")));
  EXPECT_EQ(report["method"], "itermegablast");
  EXPECT_EQ(report["seed"], 7);
  EXPECT_FALSE(fs::exists(path("out.fasta.tmp")));
}

TEST_F(CliTest, EveryMethodRuns) {
  const auto in = corpus(3, 3);
  for (const auto& m : dnaobf::cli::kMethods) {
    const auto r = run({"obfuscate", in, "--method", m, "--report", path("r.tsv")});
    EXPECT_EQ(r.code, 0) << m << ": " << r.err;
    EXPECT_NE(slurp(path("r.tsv")).find("#method\t" + m), std::string::npos);
  }
}

TEST_F(CliTest, RepeatEmitsAggregate) {
  const auto in = corpus();
  const auto r = run({"obfuscate", in, "--repeat", "3", "-o", path("o.fa")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("#runs\t3\n"), std::string::npos);
}

TEST_F(CliTest, MissingInputExitsOneWithPath) {
  const auto r = run({"obfuscate", "/no/such/file.fasta"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/no/such/file.fasta"), std::string::npos);
}

TEST_F(CliTest, BadFlagsExitOne) {
  EXPECT_EQ(run({"obfuscate", "x.fa", "--method", "nope"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  const auto in = corpus();
  EXPECT_EQ(run({"obfuscate", in, "--word-size", "2"}).code, 1);
  EXPECT_EQ(run({"obfuscate", in, "--mismatch", "1"}).code, 1);
}

TEST_F(CliTest, FailureLeavesNoPartialOutput) {
  const auto bad = write("bad.fasta", ">a\nACGT\n>b\nAC?T\n");
  const auto r = run({"obfuscate", bad, "-o", path("out.fasta"), "--report", path("rep.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("out.fasta")));
  EXPECT_FALSE(fs::exists(path("rep.tsv")));
}

TEST_F(CliTest, OutputsDeterministicAcrossRunsAndThreads) {
  const auto in = corpus(5, 3);
  for (const std::string method : {"itermegablast", "mwm", "hillclimb"}) {
    std::vector<std::string> outs;
    for (const std::string threads : {"1", "1", "3"}) {
      const auto r = run({"obfuscate", in, "--method", method, "--seed", "9", "--threads", threads,
                          "--no-timing", "--format", "json"});
      ASSERT_EQ(r.code, 0) << r.err;
      outs.push_back(r.out);
    }
    EXPECT_EQ(outs[0], outs[1]) << method;
    EXPECT_EQ(outs[0], outs[2]) << method;
  }
}

TEST_F(CliTest, MatrixTsv) {
  const auto in = corpus(2, 2);
  const auto r = run({"matrix", in});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("id\tf0_c0\tf1_c0\tf0_c1\tf1_c1\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST_F(CliTest, BenchShapeAndDeterminism) {
  const std::vector<std::string> args = {"bench", "--sizes", "10,20,30", "--methods",
                                         "itermegablast,greedy", "--repeat", "3", "--length",
                                         "200", "--no-timing"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 2 + 6);
  EXPECT_EQ(run({"bench", "--sizes", "100", "--repeat", "1"}).code, 1);
}

TEST_F(CliTest, BenchInvocationBound) {
  const auto r = run({"bench", "--sizes", "11,20", "--methods", "itermegablast", "--repeat", "2",
                      "--length", "150", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : dnaobf::Json::parse(r.out)["rows"])
    EXPECT_LE(row["max_search_invocations"].get<std::size_t>(),
              row["size"].get<std::size_t>() / 2);
}

TEST_F(CliTest, TablesDump) {
  const auto r = run({"tables", "--which", "distance"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, dnaobf::distance_table_tsv());
}

TEST_F(CliTest, HelpMatchesSnapshot) {
  for (const std::string sub : {"", "obfuscate", "bench"}) {
    std::vector<std::string> args;
    if (!sub.empty()) args.push_back(sub);
    args.push_back("--help");
    const auto r = run(args);
    EXPECT_EQ(r.code, 0);
    const fs::path snap = fs::path(DNAOBF_SNAPSHOT_DIR) / ("help" + (sub.empty() ? "" : "_" + sub) + ".txt");
    if (std::getenv("DNAOBF_UPDATE_SNAPSHOTS")) std::ofstream(snap) << r.out;
    EXPECT_EQ(r.out, slurp(snap)) << "snapshot " << snap;
  }
}
