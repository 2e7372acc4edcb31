#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "segrelab/io.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("segrelab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  // exit status of the CLI; stdout goes to out.txt
  int run(const std::string& args) const {
    const std::string cmd = std::string(SEGRELAB_CLI) + " " + args + " > " + path("out.txt") + " 2> " + path("err.txt");
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  std::string out() const { return segrelab::read_file(path("out.txt")); }
  std::string err() const { return segrelab::read_file(path("err.txt")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, BuildProjectivePlane) {
  write("fano.cfg", R"({"kind": "projective", "n": 3, "p": 2})");
  ASSERT_EQ(run("build -s " + path("fano.cfg") + " -o " + path("fano.json")), 0);
  const auto f = segrelab::parse_incidence(segrelab::read_file(path("fano.json")));
  EXPECT_EQ(f.structure.num_points(), 7);
  EXPECT_EQ(f.structure.num_lines(), 7);
}

TEST_F(Cli, CheckFanoAndGrid) {
  write("fano.cfg", R"({"kind": "projective", "n": 3, "p": 2})");
  write("grid.cfg", R"({"kind": "product", "factors": [{"kind": "projective", "n": 2, "p": 2},
                                                       {"kind": "projective", "n": 2, "p": 2}]})");
  ASSERT_EQ(run("build -s " + path("fano.cfg") + " -o " + path("fano.json")), 0);
  ASSERT_EQ(run("build -s " + path("grid.cfg") + " -o " + path("grid.json")), 0);
  EXPECT_EQ(segrelab::parse_incidence(segrelab::read_file(path("grid.json"))).structure.num_lines(), 6);

  EXPECT_EQ(run("check -i " + path("fano.json") + " -p veblenian,gamma"), 0);
  EXPECT_EQ(out(), "veblenian: true\ngamma: true\n");
  EXPECT_EQ(run("check -i " + path("grid.json") + " -p linear"), 0);
  EXPECT_EQ(out(), "linear: false\n");
  EXPECT_EQ(run("check -i " + path("grid.json") + " -p linear=true"), 1);
  EXPECT_EQ(run("check -i " + path("grid.json") + " -p linear=false"), 0);
}

TEST_F(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run("check -i " + path("missing.json") + " -p linear"), 2);
  write("bad.cfg", R"({"kind": "grassmann", "n": 4, "k": 5, "p": 2})");
  EXPECT_EQ(run("build -s " + path("bad.cfg") + " -o " + path("bad.json")), 2);
  EXPECT_NE(err().find("InvalidDimension"), std::string::npos);
  write("broken.cfg", "{\n  \"kind\": \"projective\",\n  \"n\": \n}");
  EXPECT_EQ(run("build -s " + path("broken.cfg")), 2);
  EXPECT_NE(err().find("line 4"), std::string::npos);
  EXPECT_EQ(run("verify --suites no-such-suite"), 2);
  EXPECT_NE(err().find("lem-flappy-implies-spiky"), std::string::npos);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, VerifySummaryAndGates) {
  EXPECT_EQ(run("verify --suites lem-flappy-implies-spiky"), 0);
  EXPECT_NE(out().find("PASS 1/1"), std::string::npos);
  EXPECT_EQ(run("verify --suites rem-gkz-iff-spiky --p 2"), 0);
  EXPECT_EQ(run("verify --suites fact-covering --p 2"), 0);
  EXPECT_NE(out().find("SKIPPED-HYPOTHESIS  fact-covering"), std::string::npos);
  EXPECT_EQ(run("verify --suites exm-spiky-nonflappy"), 1);
}

TEST_F(Cli, ReportsAreIndependentOfWorkerCount) {
  const std::string ids = "--suites lem-hip-restricted,prop-fct-mu,fact-afred,lem-quadrparal --seed 7 --no-timing";
  EXPECT_EQ(run("verify " + ids + " --workers 1 --report " + path("a.json")), 1);
  EXPECT_EQ(run("verify " + ids + " --workers 4 --report " + path("b.json")), 1);
  EXPECT_EQ(segrelab::read_file(path("a.json")), segrelab::read_file(path("b.json")));
  const auto report = segrelab::Json::parse(segrelab::read_file(path("a.json")));
  ASSERT_EQ(report["records"].size(), 4u);
  EXPECT_EQ(report["records"][0]["suite_id"], "fact-afred");
  EXPECT_EQ(report["config"]["seed"], 7);
  // the failing record carries its counterexample
  EXPECT_EQ(report["records"][2]["status"], "FAIL");
  EXPECT_FALSE(report["records"][2]["witness"].is_null());
}

TEST_F(Cli, MaxPointsFromEnvironment) {
  const std::string cmd = "SEGRELAB_MAX_POINTS=100 " + std::string(SEGRELAB_CLI) +
                          " verify --suites prop-h-k1k2 > " + path("out.txt");
  const int raw = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(raw), 0);
  EXPECT_NE(out().find("SKIPPED-HYPOTHESIS  prop-h-k1k2"), std::string::npos);
}
