#include "fatmesh/config.hpp"

#include "fatmesh/error.hpp"
#include "fatmesh/manifold.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fatmesh {

using nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void reject_unknown(const ordered_json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(prefix + it.key(), "unknown key");
  }
}

template <class T>
void read(const ordered_json& obj, const char* key, const std::string& field, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

void validate(const RunConfig& cfg) {
  const auto m = make_manifold(cfg.manifold, cfg.params);
  if (cfg.base_point) {
    require(static_cast<int>(cfg.base_point->size()) == m->ambient_dim(), "base_point",
            "needs " + std::to_string(m->ambient_dim()) + " coordinates");
    for (double v : *cfg.base_point) require(std::isfinite(v), "base_point", "coordinates must be finite");
  }
  require(cfg.num_stages >= 1, "num_stages", "must be at least 1");
  require(cfg.phi0 >= 0.0 && cfg.phi0 <= 1.0, "phi0", "must lie in [0, 1]");
  require(cfg.thicken_rounds >= 0, "thicken_rounds", "must be non-negative");
  if (cfg.epsilon) require(*cfg.epsilon > 0.0 && std::isfinite(*cfg.epsilon), "epsilon", "must be positive");
  require(cfg.extent > 0.0 && std::isfinite(cfg.extent), "extent", "must be positive");
  require(cfg.eta_floor > 0.0, "eta_floor", "must be positive");
  require(cfg.step_cap > 0.0, "step_cap", "must be positive");
  require(cfg.reach_cap > 0.0, "reach_cap", "must be positive");
  require(cfg.decay >= 0.5 && cfg.decay < 1.0, "decay", "must lie in [0.5, 1)");
  require(cfg.sampling.rejection_streak > 0, "sampling.rejection_streak", "must be positive");
  require(cfg.sampling.witness_density > 0.0, "sampling.witness_density", "must be positive");
  require(cfg.sampling.radius_samples >= 2, "sampling.radius_samples", "must be at least 2");
  require(cfg.sampling.connectivity_grid > 0, "sampling.connectivity_grid", "must be positive");
  require(!cfg.output.dir.empty(), "output.dir", "must not be empty");
  require(cfg.output.format == "off" || cfg.output.format == "obj", "output.format", "must be off or obj");
}

RunConfig parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("config parse error at line " + std::to_string(line) + ": " + e.what(), line);
  }
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(j, "",
                 {"manifold", "base_point", "num_stages", "seed", "phi0", "thicken_rounds", "epsilon", "extent",
                  "eta_floor", "step_cap", "reach_cap", "decay", "sampling", "output"});

  RunConfig cfg;
  if (auto it = j.find("manifold"); it != j.end()) {
    if (it->is_string()) {
      cfg.manifold = it->get<std::string>();
    } else if (it->is_object()) {
      reject_unknown(*it, "manifold.", {"name", "params"});
      read(*it, "name", "manifold.name", cfg.manifold);
      if (auto p = it->find("params"); p != it->end()) {
        if (!p->is_object()) throw ConfigError("manifold.params", "must be an object");
        for (auto q = p->begin(); q != p->end(); ++q) {
          if (!q->is_number()) throw ConfigError("manifold.params." + q.key(), "must be a number");
          cfg.params[q.key()] = q->get<double>();
        }
      }
    } else {
      throw ConfigError("manifold", "must be a name or an object");
    }
  }
  if (auto it = j.find("base_point"); it != j.end() && !it->is_null()) {
    std::vector<double> bp;
    read(j, "base_point", "base_point", bp);
    cfg.base_point = bp;
  }
  read(j, "num_stages", "num_stages", cfg.num_stages);
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) throw ConfigError("seed", "must be a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  read(j, "phi0", "phi0", cfg.phi0);
  read(j, "thicken_rounds", "thicken_rounds", cfg.thicken_rounds);
  if (auto it = j.find("epsilon"); it != j.end() && !it->is_null()) {
    double e = 0.0;
    read(j, "epsilon", "epsilon", e);
    cfg.epsilon = e;
  }
  read(j, "extent", "extent", cfg.extent);
  read(j, "eta_floor", "eta_floor", cfg.eta_floor);
  read(j, "step_cap", "step_cap", cfg.step_cap);
  read(j, "reach_cap", "reach_cap", cfg.reach_cap);
  read(j, "decay", "decay", cfg.decay);
  if (auto it = j.find("sampling"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("sampling", "must be an object");
    reject_unknown(*it, "sampling.", {"rejection_streak", "witness_density", "radius_samples", "connectivity_grid"});
    read(*it, "rejection_streak", "sampling.rejection_streak", cfg.sampling.rejection_streak);
    read(*it, "witness_density", "sampling.witness_density", cfg.sampling.witness_density);
    read(*it, "radius_samples", "sampling.radius_samples", cfg.sampling.radius_samples);
    read(*it, "connectivity_grid", "sampling.connectivity_grid", cfg.sampling.connectivity_grid);
  }
  if (auto it = j.find("output"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("output", "must be an object");
    reject_unknown(*it, "output.", {"dir", "format"});
    read(*it, "dir", "output.dir", cfg.output.dir);
    read(*it, "format", "output.format", cfg.output.format);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
  ordered_json j;
  j["manifold"]["name"] = cfg.manifold;
  j["manifold"]["params"] = ordered_json::object();
  for (const auto& [k, v] : cfg.params) j["manifold"]["params"][k] = v;
  j["base_point"] = cfg.base_point ? ordered_json(*cfg.base_point) : ordered_json(nullptr);
  j["num_stages"] = cfg.num_stages;
  j["seed"] = cfg.seed;
  j["phi0"] = cfg.phi0;
  j["thicken_rounds"] = cfg.thicken_rounds;
  j["epsilon"] = cfg.epsilon ? ordered_json(*cfg.epsilon) : ordered_json(nullptr);
  j["extent"] = cfg.extent;
  j["eta_floor"] = cfg.eta_floor;
  j["step_cap"] = cfg.step_cap;
  j["reach_cap"] = cfg.reach_cap;
  j["decay"] = cfg.decay;
  j["sampling"]["rejection_streak"] = cfg.sampling.rejection_streak;
  j["sampling"]["witness_density"] = cfg.sampling.witness_density;
  j["sampling"]["radius_samples"] = cfg.sampling.radius_samples;
  j["sampling"]["connectivity_grid"] = cfg.sampling.connectivity_grid;
  j["output"]["dir"] = cfg.output.dir;
  j["output"]["format"] = cfg.output.format;
  return j.dump(2) + "\n";
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file " + path.string());
  out << dump_config(cfg);
}

}  // namespace fatmesh
