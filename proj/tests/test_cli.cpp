#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / ("hjnet_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HJNET_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolveSingleArc) {
  const auto dir = scratch();
  const auto out = dir / "single.csv";
  ASSERT_EQ(run("solve " + hjtest::data_file("single_arc.json") + " --h 0.25 -o " + out.string(), dir / "log"), 0)
      << slurp(dir / "log");
  EXPECT_EQ(slurp(out), "arc_id,t,x1,x2,u\n0,0,0,0,0\n0,0.25,0.25,0,0.25\n0,0.5,0.5,0,0.5\n0,0.75,0.75,0,0.25\n0,1,1,0,0\n");
  EXPECT_NE(slurp(dir / "log").find("warning"), std::string::npos);
}

TEST(Cli, DeterministicAndKruzkovConsistent) {
  const auto dir = scratch();
  const auto net = hjtest::data_file("test4.json");
  ASSERT_EQ(run("solve " + net + " --h 0.05 -o " + (dir / "a.csv").string(), dir / "log"), 0);
  ASSERT_EQ(run("solve " + net + " --h 0.05 -o " + (dir / "b.csv").string(), dir / "log"), 0);
  ASSERT_EQ(run("solve " + net + " --h 0.05 --kruzkov -o " + (dir / "k.csv").string(), dir / "log"), 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  std::istringstream a(slurp(dir / "a.csv")), k(slurp(dir / "k.csv"));
  std::string la, lk;
  std::getline(a, la);
  std::getline(k, lk);
  EXPECT_EQ(la, lk);
  while (std::getline(a, la) && std::getline(k, lk)) {
    const double ua = std::stod(la.substr(la.rfind(',') + 1));
    const double uk = std::stod(lk.substr(lk.rfind(',') + 1));
    EXPECT_NEAR(ua, uk, 1e-8);
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch();
  EXPECT_EQ(run("solve " + (dir / "missing.json").string(), dir / "log"), 1);
  EXPECT_EQ(run("solve", dir / "log"), 1);

  std::ofstream(dir / "no_g.json") << R"({"vertices":[{"id":0,"position":[0,0]},{"id":1,"position":[1,0]}],
    "arcs":[{"id":0,"start":0,"end":1,"geometry":{"kind":"segment","from":[0,0],"to":[1,0]}}],
    "boundary":[{"vertex":0,"g":0},{"vertex":1}],
    "cost":{"kind":"constant","params":{"value":1},"eta":1}})";
  EXPECT_EQ(run("solve " + (dir / "no_g.json").string(), dir / "log"), 2);
  EXPECT_NE(slurp(dir / "log").find("vertex 1"), std::string::npos) << slurp(dir / "log");

  EXPECT_EQ(run("solve " + hjtest::data_file("test2.json") + " --h 0.05 --max-sweeps 2", dir / "log"), 3);
  EXPECT_EQ(run("study " + hjtest::data_file("single_arc.json") + " --steps 0.2,0.15", dir / "log"), 1);
  EXPECT_NE(slurp(dir / "log").find("halve"), std::string::npos);
  EXPECT_EQ(run("study " + hjtest::data_file("single_arc.json") + " --reference exact:nothing", dir / "log"), 1);
}

TEST(Cli, StudyWritesReport) {
  const auto dir = scratch();
  const auto prefix = (dir / "t3").string();
  ASSERT_EQ(run("study " + hjtest::data_file("test3.json") + " --reference fine:0.005 --steps 0.2,0.1,0.05 --output-prefix " + prefix,
                dir / "log"),
            0)
      << slurp(dir / "log");
  const auto csv = slurp(prefix + ".csv");
  EXPECT_EQ(csv.rfind("dx,linf,ord_linf,l2,ord_l2\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(slurp(prefix + ".txt").rfind("dx=h", 0), 0u);
}

TEST(Cli, PathsThroughYCentre) {
  const auto dir = scratch();
  std::ofstream(dir / "starts.csv") << "arc_id,t\n0,0.95\n2,1.0\n";
  const auto out = dir / "paths";
  ASSERT_EQ(run("paths " + hjtest::data_file("y_network.json") + " --h 0.05 --starts " + (dir / "starts.csv").string() +
                    " --output-dir " + out.string(),
                dir / "log"),
            0)
      << slurp(dir / "log");
  const auto p0 = slurp(out / "path_0.csv");
  EXPECT_EQ(p0.rfind("step,arc_id,t,x1,x2,cumulative_cost\n", 0), 0u);
  // back along leg 0 to the centre in 19 steps, then out along leg 2 to the boundary leaf
  EXPECT_NE(p0.find("\n19,0,0,0,0,0.95"), std::string::npos) << p0;
  EXPECT_NE(p0.find("\n39,2,"), std::string::npos) << p0;
  // boundary start gives a single row
  const auto p1 = slurp(out / "path_1.csv");
  EXPECT_EQ(std::count(p1.begin(), p1.end(), '\n'), 2);
}

TEST(Cli, ValidateBundled) {
  const auto dir = scratch();
  for (const auto& name : hjtest::bundled()) {
    EXPECT_EQ(run("validate " + hjtest::data_file(name), dir / "log"), 0) << name;
    EXPECT_EQ(slurp(dir / "log").find("FAIL"), std::string::npos) << name;
  }
}
