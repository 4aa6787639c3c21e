#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "monolab_cli_test";

int run_cli(const std::string& args) {
  std::filesystem::create_directories(kDir);
  const std::string cmd = "MONOLAB_OUTPUT_DIR=" + kDir.string() + " " + MONOLAB_CLI_PATH + " " + args + " > " +
                          (kDir / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli("scaling --set bogus=1"), 2);
  EXPECT_EQ(run_cli("scaling --set replicates=0 --out x.csv"), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
}

TEST(Cli, IoErrorsExitThree) {
  EXPECT_EQ(run_cli("scaling --set function=onemax n=8 c=0.5 replicates=1 --out missing_dir/x.csv"), 3);
  EXPECT_EQ(run_cli("verify --in /nonexistent/file.wseq"), 3);
}

TEST(Cli, CheckMonotonePasses) {
  EXPECT_EQ(run_cli("check-monotone --set preset=custom n=12 beta=0.25 alpha=0.1 gamma=0.5 length=64"), 0);
  EXPECT_NE(slurp(kDir / "stdout.txt").find("passed=1"), std::string::npos);
}

TEST(Cli, VerifyFailureExitsOne) {
  // gamma tiny forces the overlap bound to fail.
  EXPECT_EQ(run_cli("verify --set preset=custom n=60 beta=0.1 alpha=0.02 gamma=0.01 length=300"), 1);
}

TEST(Cli, ConstructThenVerify) {
  ASSERT_EQ(run_cli("construct --set n=200 beta=0.1 gamma=0.5 alpha=0.02 length=500 preset=custom "
                    "--out w.wseq --descriptor w.desc"),
            0);
  EXPECT_TRUE(std::filesystem::exists(kDir / "w.wseq"));
  EXPECT_NE(slurp(kDir / "w.desc").find("window_file=w.wseq"), std::string::npos);
  EXPECT_EQ(run_cli("verify --set gamma=0.5 --in " + (kDir / "w.wseq").string()), 0);
}

TEST(Cli, StudiesAreByteIdentical) {
  const std::string args = "scaling --set function=onemax n=16,32 c=0.5 replicates=4 seed=3 --out s.csv";
  ASSERT_EQ(run_cli(args), 0);
  const std::string first = slurp(kDir / "s.csv");
  ASSERT_EQ(run_cli(args), 0);
  EXPECT_EQ(slurp(kDir / "s.csv"), first);
  EXPECT_NE(first.find("# seed=3"), std::string::npos);
}

TEST(Cli, RunAndDrift) {
  EXPECT_EQ(run_cli("run --set function=fpi n=100 c=10 length=1000 budget=absolute:5000 --out t.csv"), 0);
  EXPECT_NE(slurp(kDir / "t.csv").find("generation,ones,tier"), std::string::npos);
  EXPECT_EQ(run_cli("drift --quantity hitting --interval 3 --trials 200 --budget 1000 --out h.csv"), 0);
  EXPECT_NE(slurp(kDir / "h.csv").find("hit_fraction"), std::string::npos);
  EXPECT_EQ(run_cli("drift --quantity outside --samples 1000"), 0);
}
