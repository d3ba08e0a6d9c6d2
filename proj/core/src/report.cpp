#include "fatmesh/report.hpp"

#include "fatmesh/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fatmesh {

using nlohmann::ordered_json;

namespace {

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json covering(const CoveringCheck& c) {
  return {{"pass", c.pass}, {"max_distance", num(c.max_distance)}, {"tested", c.tested}};
}

double uniformity(const PipelineResult& r) {
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& s : r.stages) {
    lo = std::min(lo, s.min_phi);
    hi = std::max(hi, s.min_phi);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write to " + path.string() + " failed");
}

}  // namespace

std::string report_json(const PipelineResult& r) {
  ordered_json j;
  j["schema"] = "fatmesh-report/1";
  j["config"] = ordered_json::parse(dump_config(r.config));
  j["base_point"] = ordered_json::array();
  for (Eigen::Index i = 0; i < r.base_point.size(); ++i) j["base_point"].push_back(r.base_point[i]);

  auto& mesh = j["mesh"];
  mesh["vertices"] = r.mesh.vertices.size();
  mesh["cells"] = r.mesh.cells.size();
  mesh["euler_characteristic"] = r.euler_characteristic;
  mesh["boundary_loops"] = r.boundary_loops;
  mesh["covers_manifold"] = r.covers_manifold;
  mesh["valid"] = r.validity.valid;
  mesh["violations"] = r.validity.violations.size();
  mesh["digest"] = r.digest;

  auto& th = j["thickness"];
  th["min_thickness"] = r.thickness.min_thickness;
  th["argmin_cell"] = r.thickness.argmin_cell;
  th["cell_count"] = r.thickness.cell_count;
  th["per_dimension_min"] = ordered_json::object();
  for (const auto& [k, v] : r.thickness.per_dimension_min) th["per_dimension_min"][std::to_string(k)] = v;
  th["histogram"] = ordered_json::array();
  for (const auto& b : r.thickness.histogram) {
    th["histogram"].push_back({{"bucket_lo", b.lo}, {"bucket_hi", b.hi}, {"count", b.count}});
  }

  j["certification"] = {{"phi0", r.config.phi0}, {"certified", r.certified}};

  j["stages"] = ordered_json::array();
  for (const auto& s : r.stages) {
    ordered_json st;
    st["index"] = s.index;
    st["r_inner"] = num(s.r_inner);
    st["r_outer"] = num(s.r_outer);
    st["mesh_inner"] = num(s.mesh_inner);
    st["mesh_outer"] = num(s.mesh_outer);
    st["eta"] = s.eta;
    st["epsilon"] = s.epsilon;
    st["eta_bound_satisfied"] = s.eta_bound_satisfied;
    st["omega"] = num(s.radii.omega);
    st["omega_flat"] = s.radii.omega_flat;
    st["kappa"] = num(s.radii.kappa);
    st["sample_count"] = s.radii.sample_count;
    st["inequality_pass"] = s.inequality.pass;
    st["inequality_margin"] = num(s.inequality.margin);
    st["net_size"] = s.net_size;
    st["vertices"] = s.vertices;
    st["cells"] = s.cells;
    st["min_phi"] = s.min_phi;
    st["valid"] = s.valid;
    if (s.gluing) {
      st["gluing"] = {{"pass", s.gluing->pass},
                      {"band_width", num(s.gluing->band_width)},
                      {"required_width", num(s.gluing->required_width)},
                      {"cover_first", covering(s.gluing->cover_first)},
                      {"cover_second", covering(s.gluing->cover_second)}};
    } else {
      st["gluing"] = nullptr;
    }
    j["stages"].push_back(std::move(st));
  }

  j["mashes"] = ordered_json::array();
  for (const auto& mr : r.mashes) {
    j["mashes"].push_back({{"stage", mr.stage},
                           {"c", num(mr.c)},
                           {"bridge_cells", mr.bridge_cells},
                           {"bridge_min_phi", mr.bridge_min_phi},
                           {"ring_first", mr.ring_first},
                           {"ring_second", mr.ring_second}});
  }
  j["thicken_history"] = r.thicken_history;
  j["uniformity_ratio"] = num(uniformity(r));
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string histogram_csv(const ThicknessReport& report) {
  std::ostringstream out;
  out << "bucket_lo,bucket_hi,count\n" << std::setprecision(17);
  for (const auto& b : report.histogram) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
  return out.str();
}

std::string summary_text(const PipelineResult& r) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "manifold        " << r.config.manifold << '\n';
  out << "stages          " << r.stages.size() << '\n';
  out << "vertices        " << r.mesh.vertices.size() << '\n';
  out << "cells           " << r.mesh.cells.size() << '\n';
  out << "euler           " << r.euler_characteristic << '\n';
  out << "boundary loops  " << r.boundary_loops << '\n';
  out << "valid           " << (r.validity.valid ? "yes" : "no") << '\n';
  out << "min thickness   " << r.thickness.min_thickness << " (cell " << r.thickness.argmin_cell << ")\n";
  out << "phi0            " << r.config.phi0 << '\n';
  out << "certified       " << (r.certified ? "yes" : "no") << '\n';
  for (const auto& s : r.stages) {
    out << "stage " << s.index << "  eta " << s.eta << "  omega " << s.radii.omega << "  kappa " << s.radii.kappa
        << "  margin " << s.inequality.margin << "  cells " << s.cells << "  min phi " << s.min_phi << '\n';
  }
  for (const auto& mr : r.mashes) {
    out << "mash into stage " << mr.stage << "  c " << mr.c << "  bridge cells " << mr.bridge_cells << '\n';
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << "elapsed         " << r.elapsed_seconds << " s\n";
  out << "digest          " << r.digest << '\n';
  return out.str();
}

void emit_report(const PipelineResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.json", report_json(result));
  write_file(dir / "histogram.csv", histogram_csv(result.thickness));
  write_file(dir / "summary.txt", summary_text(result));
}

}  // namespace fatmesh
