#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "llb");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = llb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / "llb_cli_test";
  void SetUp() override {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string config(const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  return n;
}

}  // namespace

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  const Result r = run({"frobnicate"});
  EXPECT_EQ(r.code, llb::cli::config_error);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(run({}).code, llb::cli::config_error); }

TEST_F(CliTest, MissingConfigFlag) { EXPECT_EQ(run({"simulate"}).code, llb::cli::config_error); }

TEST_F(CliTest, MissingConfigFile) {
  const Result r = run({"simulate", "--config", (dir / "absent.toml").string()});
  EXPECT_EQ(r.code, llb::cli::config_error);
  EXPECT_NE(r.err.find("absent.toml"), std::string::npos) << r.err;
}

TEST_F(CliTest, SemanticErrorNamesKey) {
  const Result r = run({"simulate", "--config", config("bad.toml", "preset = \"sim1\"\n[params]\nepsilon = -1\n")});
  EXPECT_EQ(r.code, llb::cli::config_error);
  EXPECT_NE(r.err.find("params.epsilon"), std::string::npos) << r.err;
}

TEST_F(CliTest, SyntaxErrorNamesLine) {
  const Result r = run({"simulate", "--config", config("bad.toml", "preset = \"sim1\"\n[params\n")});
  EXPECT_EQ(r.code, llb::cli::config_error);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, SimulateWritesSnapshotsNormsAndEnergy) {
  const std::string cfg = config("run.toml", "preset = \"sim1\"\nn = 4\nT = 0.01\nN = 4\n[output]\nsnapshot_stride = 2\n");
  const fs::path out = dir / "out";
  const Result r = run({"simulate", "--config", cfg, "--out", out.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"u_00000.vtk", "u_00002.vtk", "u_00004.vtk"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_FALSE(fs::exists(out / "u_00001.vtk"));
  EXPECT_EQ(count_lines(out / "norms.csv"), 6u);
  EXPECT_EQ(count_lines(out / "energy.csv"), 5u);
}

TEST_F(CliTest, StarvedSolverIsSolverFailure) {
  const std::string cfg = config(
      "starved.toml",
      "preset = \"sim1\"\nn = 8\nT = 0.01\nN = 2\n[output]\nvtk = false\n[solver]\ntol = 1e-12\nmax_iter = 1\n"
      "restart = 1\npreconditioner = \"jacobi\"\n");
  const Result r = run({"simulate", "--config", cfg, "--out", (dir / "out").string(), "--quiet"});
  EXPECT_EQ(r.code, llb::cli::solver_failure) << r.err;
}

TEST_F(CliTest, StudyAxisMustMatchSubcommand) {
  const std::string cfg = config("h.toml", "preset = \"sim1\"\nn = 2\nN = 2\n[study]\naxis = \"h\"\n");
  EXPECT_EQ(run({"k-study", "--config", cfg, "--out", (dir / "out").string(), "--quiet"}).code,
            llb::cli::config_error);
}

TEST_F(CliTest, HStudyWritesTable) {
  const std::string cfg =
      config("h.toml", "preset = \"sim1\"\nn = 2\nT = 0.01\nN = 2\n[study]\naxis = \"h\"\nlevels = 3\n");
  const fs::path out = dir / "out";
  const Result r = run({"h-study", "--config", cfg, "--out", out.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(out / "table.csv"), 3u);
}

TEST_F(CliTest, DecayPasses) {
  const std::string cfg = config("d.toml", "preset = \"sim1\"\nn = 4\nT = 0.05\nN = 20\n");
  const fs::path out = dir / "out";
  const Result r = run({"decay", "--config", cfg, "--out", out.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(out / "decay.csv"), 22u);
  EXPECT_EQ(count_lines(out / "linf.csv"), 22u);
}

TEST_F(CliTest, VerifyPasses) {
  const Result r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}
