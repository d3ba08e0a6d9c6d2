#include "fatmesh/report.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using namespace fatmesh;
using nlohmann::ordered_json;

// One line per key path with its JSON type; arrays contribute their first
// element only.
void skeleton(const ordered_json& j, const std::string& path, std::ostream& out) {
  out << path << ' ' << j.type_name() << '\n';
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) skeleton(it.value(), path + "." + it.key(), out);
  } else if (j.is_array() && !j.empty()) {
    skeleton(j.front(), path + "[]", out);
  }
}

class Report : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    RunConfig cfg;
    cfg.epsilon = 0.4;
    result = run_pipeline(cfg);
    text = report_json(result);
  }
  static inline PipelineResult result;
  static inline std::string text;
};

TEST_F(Report, SchemaMatchesGolden) {
  std::ostringstream got;
  skeleton(ordered_json::parse(text), "$", got);
  std::ifstream in(std::filesystem::path(FATMESH_TEST_DATA) / "report_schema.txt");
  ASSERT_TRUE(in) << "missing golden file";
  std::stringstream want;
  want << in.rdbuf();
  EXPECT_EQ(got.str(), want.str());
}

TEST_F(Report, CarriesThicknessAndPerStageRadii) {
  const auto j = ordered_json::parse(text);
  EXPECT_DOUBLE_EQ(j["thickness"]["min_thickness"].get<double>(), result.thickness.min_thickness);
  ASSERT_EQ(j["stages"].size(), result.stages.size());
  for (const auto& st : j["stages"]) {
    EXPECT_TRUE(st.contains("min_phi"));
    EXPECT_TRUE(st.contains("omega"));
    EXPECT_TRUE(st.contains("kappa"));
    EXPECT_TRUE(st.contains("inequality_margin"));
  }
  EXPECT_FALSE(j.contains("elapsed_seconds"));
  EXPECT_EQ(j["schema"], "fatmesh-report/1");
}

TEST_F(Report, HistogramMassIsCellCount) {
  const auto j = ordered_json::parse(text);
  std::size_t mass = 0;
  for (const auto& b : j["thickness"]["histogram"]) mass += b["count"].get<std::size_t>();
  EXPECT_EQ(mass, result.mesh.cells.size());
  const auto csv = histogram_csv(result.thickness);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bucket_lo,bucket_hi,count");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), result.thickness.histogram.size() + 1);
}

TEST_F(Report, IdenticalRunsGiveIdenticalBytes) {
  RunConfig cfg;
  cfg.epsilon = 0.4;
  EXPECT_EQ(report_json(run_pipeline(cfg)), text);
}

TEST_F(Report, EmitWritesThreeFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "fatmesh_report_test";
  emit_report(result, dir);
  for (const char* f : {"report.json", "histogram.csv", "summary.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "report.json");
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), text);
  EXPECT_NE(summary_text(result).find("certified"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
