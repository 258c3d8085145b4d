// Runs the command-line tool end to end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flexsat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(FLEXSAT_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string write_config(const std::string& json) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << json;
    return p.string();
  }

  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  std::string first_line(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::string line;
    std::getline(in, line);
    return line;
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidatePasses) {
  EXPECT_EQ(run("validate --config " + write_config(R"({"N": 8})")), 0);
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("PASS  regulation_zeros"), std::string::npos);
  EXPECT_EQ(out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, ValidateUndampedWarns) {
  EXPECT_EQ(run("validate --config " + write_config(R"({"N": 6, "params": {"gamma": 0}})")), 0);
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("WARN  plant_margin"), std::string::npos);
  EXPECT_NE(out.find("SKIP  closed_loop_margin"), std::string::npos);
}

TEST_F(CliTest, SimulateWritesOutputs) {
  const std::string cfg = write_config(R"({"N": 6, "time": {"T": 1, "dt": 0.01}})");
  EXPECT_EQ(run("simulate --config " + cfg + " --out " + dir_.string()), 0);
  EXPECT_EQ(first_line("trace.csv"), "t,y1,y2,e1,e2,u1,u2,energy");
  EXPECT_EQ(first_line("summary.csv"), "margin,l2sq,decay_rate,floored");
  EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
}

TEST_F(CliTest, SweepWritesCsv) {
  const std::string cfg = write_config(R"({"N": 6, "time": {"T": 1, "dt": 0.01}})");
  EXPECT_EQ(run("sweep --config " + cfg + " --param c2 --grid 1:4:3 --out " + dir_.string()), 0);
  EXPECT_EQ(first_line("sweep_c2.csv"), "param,value,margin,l2sq,stable");
  EXPECT_EQ(run("sweep --config " + cfg + " --param r0 --out " + dir_.string()), 2);
}

TEST_F(CliTest, AnalyzeWritesCsv) {
  const std::string cfg = write_config(
      R"({"N": 6, "analyze": {"N_list": [4, 6], "resolvent_n": 11, "interconnection_n": 10}})");
  EXPECT_EQ(run("analyze --config " + cfg + " --out " + dir_.string()), 0);
  EXPECT_EQ(first_line("transfer_error.csv"), "N,max_rel_error,worst_omega");
  EXPECT_EQ(first_line("resolvent.csv"), "omega,norm_energy,norm_2");
  EXPECT_NE(read("analysis_summary.csv").find("q1_min"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("validate --config " + write_config(R"({"params": {"m": -1}})")), 2);
  EXPECT_EQ(run("validate --config " + write_config("{oops")), 2);
  EXPECT_EQ(run("simulate --perturb bogus=1"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("simulate --config " + write_config(R"({"time": {"T": 1, "dt": 0.3}})")), 2);
}

}  // namespace
