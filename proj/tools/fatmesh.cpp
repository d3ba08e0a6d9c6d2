// fatmesh command-line tool: generate, audit, radii, net.

#include "fatmesh/config.hpp"
#include "fatmesh/error.hpp"
#include "fatmesh/mesh_io.hpp"
#include "fatmesh/pipeline.hpp"
#include "fatmesh/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace fatmesh;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kPipeline = 3;
constexpr int kUncertified = 4;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> stages;
  std::optional<double> phi0;
  std::optional<double> epsilon;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--stages", o.stages, "number of exhaustion stages");
  cmd->add_option("--phi0", o.phi0, "thickness to certify");
  cmd->add_option("--epsilon", o.epsilon, "first-stage net radius");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "mesh format")->check(CLI::IsMember({"off", "obj"}));
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.stages) cfg.num_stages = *o.stages;
  if (o.phi0) cfg.phi0 = *o.phi0;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.out) cfg.output.dir = *o.out;
  if (o.format) cfg.output.format = *o.format;
  validate(cfg);
  return cfg;
}

int run_generate(const Overrides& o) {
  const auto cfg = resolve(o);
  const auto result = run_pipeline(cfg);
  const std::filesystem::path dir = cfg.output.dir;
  emit_report(result, dir);
  export_mesh(result.mesh, dir / ("mesh." + cfg.output.format), parse_mesh_format(cfg.output.format));
  std::cout << summary_text(result);
  return result.certified ? kOk : kUncertified;
}

int run_audit(const std::string& path, double phi0, const std::optional<std::string>& out) {
  const auto mesh = import_mesh(path);
  for (const auto& w : mesh.warnings) std::cerr << "warning: " << w << '\n';
  const auto validity = validate_complex(mesh.complex);
  const auto th = complex_thickness(mesh.complex);
  ordered_json j;
  j["file"] = path;
  j["vertices"] = mesh.complex.vertices.size();
  j["cells"] = mesh.complex.cells.size();
  j["valid"] = validity.valid;
  j["violations"] = ordered_json::array();
  for (const auto& v : validity.violations) {
    j["violations"].push_back({{"kind", to_string(v.kind)}, {"first", v.first}, {"second", v.second}});
  }
  j["min_thickness"] = th.min_thickness;
  j["argmin_cell"] = th.argmin_cell;
  j["phi0"] = phi0;
  const bool pass = th.min_thickness >= phi0;
  j["pass"] = pass;
  j["warnings"] = mesh.warnings;
  std::cout << j.dump(2) << '\n';
  if (out) {
    std::filesystem::create_directories(*out);
    std::ofstream f(std::filesystem::path(*out) / "audit.json");
    f << j.dump(2) << '\n';
    std::ofstream h(std::filesystem::path(*out) / "histogram.csv");
    h << histogram_csv(th);
  }
  return pass ? kOk : kUncertified;
}

int run_radii(const Overrides& o) {
  const auto cfg = resolve(o);
  const auto m = make_manifold(cfg.manifold, cfg.params);
  Point x0 = m->default_base_point();
  if (cfg.base_point) {
    x0 = project_to_manifold(
        *m, Eigen::Map<const Eigen::VectorXd>(cfg.base_point->data(), static_cast<Eigen::Index>(cfg.base_point->size())));
  }
  ExhaustionOptions eopt;
  eopt.extent = cfg.extent;
  eopt.step_cap = cfg.step_cap;
  eopt.eta_floor = cfg.eta_floor;
  eopt.reach_cap = cfg.reach_cap;
  eopt.radius_samples = cfg.sampling.radius_samples;
  eopt.connectivity_grid = cfg.sampling.connectivity_grid;
  eopt.seed = cfg.seed;
  const auto ex = build_exhaustion(m, x0, cfg.num_stages, eopt);
  ordered_json j;
  j["manifold"] = cfg.manifold;
  j["stages"] = ordered_json::array();
  bool all_pass = true;
  for (const auto& st : ex.stages) {
    const auto check = check_reach_inequality(st.radii);
    all_pass = all_pass && check.pass;
    j["stages"].push_back({{"index", st.index},
                           {"r_inner", st.r_inner},
                           {"r_outer", std::isfinite(st.r_outer) ? ordered_json(st.r_outer) : ordered_json(nullptr)},
                           {"omega", st.radii.omega},
                           {"omega_flat", st.radii.omega_flat},
                           {"kappa", st.radii.kappa},
                           {"inequality_pass", check.pass},
                           {"inequality_margin", check.margin}});
  }
  if (auto reach = m->analytic_reach()) {
    j["analytic_reach"] = std::isfinite(*reach) ? ordered_json(*reach) : ordered_json(nullptr);
  }
  std::cout << j.dump(2) << '\n';
  return all_pass ? kOk : kUncertified;
}

int run_net(const Overrides& o, int tests) {
  const auto cfg = resolve(o);
  const auto m = make_manifold(cfg.manifold, cfg.params);
  Point x0 = m->default_base_point();
  const double eps = cfg.epsilon.value_or(0.2);
  const Region region = m->is_compact() ? Region{x0} : Region{x0, 0.0, cfg.extent};
  NetOptions nopt;
  nopt.rejection_streak = cfg.sampling.rejection_streak;
  const auto net = maximal_net(*m, region, eps, cfg.seed, nopt);
  Rng rng(cfg.seed ^ 0x5bd1e995ULL);
  const auto probes = sample_region_n(*m, region, rng, static_cast<std::size_t>(tests));
  const auto sep = check_separation(net.points, eps);
  const auto cov = check_covering(net.points, probes, eps);
  ordered_json j;
  j["manifold"] = cfg.manifold;
  j["epsilon"] = eps;
  j["seed"] = cfg.seed;
  j["points"] = net.points.size();
  j["separation"] = {{"pass", sep.pass}, {"min_distance", sep.min_distance}};
  j["covering"] = {{"pass", cov.pass}, {"max_distance", cov.max_distance}, {"tested", cov.tested}};
  std::cout << j.dump(2) << '\n';
  if (o.out) {
    std::filesystem::create_directories(*o.out);
    std::ofstream f(std::filesystem::path(*o.out) / "net.xyz");
    f << std::setprecision(17);
    for (const auto& p : net.points) {
      for (Eigen::Index i = 0; i < p.size(); ++i) f << (i ? " " : "") << p[i];
      f << '\n';
    }
  }
  return sep.pass && cov.pass ? kOk : kUncertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thick triangulations of embedded surfaces"};
  app.require_subcommand(1);

  Overrides gen;
  auto* generate = app.add_subcommand("generate", "build and certify a mesh");
  add_overrides(generate, gen);

  std::string mesh_path;
  double audit_phi0 = 0.0;
  std::optional<std::string> audit_out;
  auto* audit = app.add_subcommand("audit", "thickness report of an OFF/OBJ mesh");
  audit->add_option("mesh", mesh_path, "mesh file")->required();
  audit->add_option("--phi0", audit_phi0, "thickness to certify");
  audit->add_option("--out", audit_out, "output directory");

  Overrides rad;
  auto* radii = app.add_subcommand("radii", "osculatory and connectivity radius estimates");
  add_overrides(radii, rad);

  Overrides netopt;
  int tests = 10000;
  auto* net = app.add_subcommand("net", "epsilon-net with separation and covering checks");
  add_overrides(net, netopt);
  net->add_option("--tests", tests, "covering probes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*audit) return run_audit(mesh_path, audit_phi0, audit_out);
    if (*radii) return run_radii(rad);
    if (*net) return run_net(netopt, tests);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInvalid;
  } catch (const MeshIoError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPipeline;
  }
  return kOk;
}
