#include "fatmesh/config.hpp"
#include "fatmesh/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace {

using namespace fatmesh;

TEST(Config, MinimalSphereFillsDefaults) {
  const auto cfg = parse_config(R"({"manifold": "sphere"})");
  EXPECT_EQ(cfg, RunConfig{});
  EXPECT_EQ(cfg.num_stages, 2);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_DOUBLE_EQ(cfg.phi0, 0.05);
  EXPECT_EQ(cfg.sampling.rejection_streak, 500);
  EXPECT_FALSE(cfg.epsilon.has_value());
  EXPECT_FALSE(cfg.base_point.has_value());
}

TEST(Config, ObjectFormManifold) {
  const auto cfg = parse_config(R"({"manifold": {"name": "torus", "params": {"major": 3, "minor": 1}},
                                    "base_point": [4, 0, 0], "seed": 12})");
  EXPECT_EQ(cfg.manifold, "torus");
  EXPECT_DOUBLE_EQ(cfg.params.at("major"), 3.0);
  ASSERT_TRUE(cfg.base_point.has_value());
  EXPECT_EQ(cfg.base_point->size(), 3u);
  EXPECT_EQ(cfg.seed, 12u);
}

TEST(Config, NegativeEtaFloorNamesTheField) {
  try {
    parse_config(R"({"eta_floor": -0.1})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "eta_floor");
  }
}

TEST(Config, UnknownManifoldListsCatalog) {
  try {
    parse_config(R"({"manifold": "klein"})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("klein"), std::string::npos);
    EXPECT_NE(what.find("sphere"), std::string::npos);
    EXPECT_NE(what.find("torus"), std::string::npos);
  }
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(parse_config(R"({"stages": 3})"), ConfigError);
  try {
    parse_config(R"({"sampling": {"streak": 3}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "sampling.streak");
  }
}

TEST(Config, WrongTypesAndValues) {
  EXPECT_THROW(parse_config(R"({"num_stages": "two"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"num_stages": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": -3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"phi0": 2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"output": {"format": "stl"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"base_point": [1, 2]})"), ConfigError);
  EXPECT_THROW(parse_config(R"([1, 2])"), ConfigError);
}

TEST(Config, ParseErrorCarriesLine) {
  try {
    parse_config("{\n  \"seed\": 3,\n  \"phi0\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Config, RoundTrip) {
  RunConfig cfg;
  cfg.manifold = "cylinder";
  cfg.params = {{"radius", 2.5}};
  cfg.base_point = std::vector<double>{2.5, 0.0, 0.1};
  cfg.num_stages = 3;
  cfg.seed = 18446744073709551557ULL;
  cfg.phi0 = 0.1234567890123456789;
  cfg.epsilon = 0.3;
  cfg.extent = 1.0 / 3.0;
  cfg.sampling.witness_density = 55.5;
  cfg.output.dir = "some/where";
  cfg.output.format = "obj";
  EXPECT_EQ(parse_config(dump_config(cfg)), cfg);
  EXPECT_EQ(parse_config(dump_config(RunConfig{})), RunConfig{});
}

TEST(Config, DumpHasEveryFieldInFixedOrder) {
  const auto text = dump_config(RunConfig{});
  std::size_t last = 0;
  for (const char* key : {"\"manifold\"", "\"base_point\"", "\"num_stages\"", "\"seed\"", "\"phi0\"",
                          "\"thicken_rounds\"", "\"epsilon\"", "\"extent\"", "\"eta_floor\"", "\"step_cap\"",
                          "\"reach_cap\"", "\"decay\"", "\"sampling\"", "\"output\""}) {
    const auto pos = text.find(key);
    ASSERT_NE(pos, std::string::npos) << key;
    EXPECT_GT(pos, last) << key;
    last = pos;
  }
  EXPECT_EQ(dump_config(RunConfig{}), text);
}

TEST(Config, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "fatmesh_config_test";
  std::filesystem::create_directories(dir);
  RunConfig cfg;
  cfg.manifold = "catenoid";
  cfg.thicken_rounds = 5;
  save_config(cfg, dir / "c.json");
  EXPECT_EQ(load_config(dir / "c.json"), cfg);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
