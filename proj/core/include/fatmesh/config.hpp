#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fatmesh {

struct SamplingConfig {
  int rejection_streak = 500;
  // Witness samples per site in the Dirichlet complex.
  double witness_density = 40.0;
  // Samples per region for the radius estimators.
  int radius_samples = 600;
  int connectivity_grid = 64;

  bool operator==(const SamplingConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "off";

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  std::string manifold = "sphere";
  std::map<std::string, double> params;
  // Defaults to the manifold's own base point.
  std::optional<std::vector<double>> base_point;
  int num_stages = 2;
  std::uint64_t seed = 7;
  double phi0 = 0.05;
  int thicken_rounds = 2;
  // Overrides the first net radius; later stages decay from it.
  std::optional<double> epsilon;
  // Radius covered by the exhaustion on unbounded manifolds.
  double extent = 2.0;
  double eta_floor = 1e-3;
  double step_cap = 1.0;
  // Osculatory radius reported for flat regions.
  double reach_cap = 1.0;
  double decay = 0.9;
  SamplingConfig sampling;
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

// Checks every field; throws ConfigError naming the first bad one.
void validate(const RunConfig& cfg);

// Parses JSON text. Throws ParseError (with line) on malformed text and
// ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Full JSON echo with every field present, keys in a fixed order.
std::string dump_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace fatmesh
