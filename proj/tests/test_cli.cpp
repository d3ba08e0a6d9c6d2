#include "fatmesh/mesh_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("fatmesh_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(const std::string& args) {
    const std::string cmd = std::string(FATMESH_CLI) + " " + args + " > " + (dir / "stdout.txt").string() +
                            " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  }

  fs::path dir;
};

TEST_F(Cli, GenerateWritesReportsAndMesh) {
  const auto out = dir / "run";
  ASSERT_EQ(run("generate --epsilon 0.4 --format obj --out " + out.string()), 0) << read(dir / "stderr.txt");
  for (const char* f : {"report.json", "histogram.csv", "summary.txt", "mesh.obj"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto j = nlohmann::json::parse(read(out / "report.json"));
  EXPECT_EQ(j["mesh"]["euler_characteristic"], 2);
  const auto mesh = fatmesh::import_mesh(out / "mesh.obj");
  EXPECT_EQ(mesh.complex.cells.size(), j["mesh"]["cells"].get<std::size_t>());
}

TEST_F(Cli, IdenticalRunsGiveIdenticalReports) {
  const auto out = (dir / "run").string();
  ASSERT_EQ(run("generate --epsilon 0.4 --seed 3 --out " + out), 0);
  const auto first = read(dir / "run" / "report.json");
  ASSERT_EQ(run("generate --epsilon 0.4 --seed 3 --out " + out), 0);
  EXPECT_EQ(read(dir / "run" / "report.json"), first);
}

TEST_F(Cli, UncertifiedRunExitsFour) {
  EXPECT_EQ(run("generate --epsilon 0.4 --phi0 0.99 --out " + (dir / "run").string()), 4);
}

TEST_F(Cli, ValidationErrorsExitTwo) {
  EXPECT_EQ(run("generate --stages 0"), 2);
  EXPECT_EQ(run("generate --format stl"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("generate --config " + write("bad.json", R"({"manifold": "klein"})").string()), 2);
  EXPECT_NE(read(dir / "stderr.txt").find("sphere"), std::string::npos);
  EXPECT_EQ(run("generate --config " + write("broken.json", "{\n\"seed\": }").string()), 2);
  EXPECT_EQ(run("generate --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, PipelineFailureExitsThree) {
  const auto cfg = write("stall.json", R"({"manifold": "paraboloid", "num_stages": 3, "eta_floor": 1.0})");
  EXPECT_EQ(run("generate --config " + cfg.string() + " --out " + (dir / "run").string()), 3);
}

TEST_F(Cli, AuditIcosahedron) {
  const auto path = dir / "ico.off";
  fatmesh::export_mesh(fatmesh::testing::icosahedron(), path, fatmesh::MeshFormat::kOff);
  ASSERT_EQ(run("audit " + path.string() + " --phi0 0.4 --out " + (dir / "audit").string()), 0);
  const auto j = nlohmann::json::parse(read(dir / "stdout.txt"));
  EXPECT_NEAR(j["min_thickness"].get<double>(), std::sqrt(3.0) / 4.0, 1e-12);
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "audit" / "audit.json"));
  EXPECT_TRUE(fs::exists(dir / "audit" / "histogram.csv"));
  EXPECT_EQ(run("audit " + path.string() + " --phi0 0.5"), 4);
  EXPECT_EQ(run("audit " + write("bad.off", "OFF\n3 1 0\n0 0 0\n").string()), 2);
}

TEST_F(Cli, RadiiAndNet) {
  ASSERT_EQ(run("radii --stages 3"), 0) << read(dir / "stderr.txt");
  const auto r = nlohmann::json::parse(read(dir / "stdout.txt"));
  EXPECT_FALSE(r["stages"].empty());
  EXPECT_TRUE(r["stages"][0]["inequality_pass"].get<bool>());
  ASSERT_EQ(run("net --epsilon 0.3 --tests 2000 --out " + (dir / "net").string()), 0);
  const auto n = nlohmann::json::parse(read(dir / "stdout.txt"));
  EXPECT_TRUE(n["separation"]["pass"].get<bool>());
  EXPECT_TRUE(n["covering"]["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "net" / "net.xyz"));
}

}  // namespace
