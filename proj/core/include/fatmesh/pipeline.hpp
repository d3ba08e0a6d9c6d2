#pragma once

#include "fatmesh/config.hpp"
#include "fatmesh/geometry.hpp"
#include "fatmesh/manifold.hpp"
#include "fatmesh/sampling.hpp"
#include "fatmesh/triangulator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fatmesh {

// K_j = M ∩ B(x0, r_outer), U_j = K_j \ K_{j-1}. r_outer is infinite once
// K_j is all of a compact M.
struct ExhaustionStage {
  std::size_t index = 1;
  double r_inner = 0.0;
  double r_outer = 0.0;
  // Osculatory radius near the inner cut surface, which set the step.
  double step_omega = 0.0;
  RadiusEstimates radii;

  Region k_region(const Point& x0) const { return {x0, 0.0, r_outer}; }
  Region u_region(const Point& x0) const { return {x0, r_inner, r_outer}; }
};

struct ExhaustionOptions {
  // Radius to cover on unbounded manifolds.
  double extent = 2.0;
  double step_cap = 1.0;
  double eta_floor = 1e-3;
  double reach_cap = 1.0;
  int radius_samples = 600;
  int connectivity_grid = 64;
  std::uint64_t seed = 0;
};

struct Exhaustion {
  Point base;
  std::vector<ExhaustionStage> stages;
  // The last stage reaches the whole (compact) manifold.
  bool covers_manifold = false;
};

// R_0 = 0, R_{j+1} = R_j + min(omega(shell around R_j) / 2, step_cap), stopping
// early once the extent (the diameter of a compact M) is reached; the last
// requested stage is stretched to the extent. Throws ExhaustionStallError
// when the osculatory radius falls below four times eta_floor.
Exhaustion build_exhaustion(const ManifoldPtr& m, const Point& x0, int num_stages, const ExhaustionOptions& opts = {});

// Cut surface N_j = M ∩ S(x0, radius).
inline ManifoldPtr cutting_surface(const ManifoldPtr& m, const Point& x0, double radius) {
  return make_sphere_slice(m, x0, radius);
}

struct StageMeshOptions {
  std::uint64_t seed = 0;
  int rejection_streak = 500;
  double witness_density = 40.0;
  // Extra cut surfaces, inside the region, whose nets seed the stage net.
  std::vector<double> cut_rings;
};

struct StageMesh {
  Region region;
  Net net;
  DualComplex mesh;
  FatnessVerdict fatness;
  // Vertices seeded from region-boundary and cut-ring nets.
  std::size_t ring_vertices = 0;
};

// Net(eta / 2) seeded with nets of the region's cut surfaces, then Dirichlet
// complex, dual, projection and fatness check.
StageMesh mesh_stage(const ManifoldPtr& m, const Region& region, double eta, const StageMeshOptions& opts = {},
                     double phi0 = 0.0);

struct MashOptions {
  double max_ring_ratio = 3.0;
  // Flip-only thickening restricted to the bridge.
  bool thicken_bridge = true;
  int bridge_rounds = 3;
};

struct MashResult {
  SimplicialComplex complex;
  // min phi(merged) / min(min phi(t1), min phi(t2)).
  double c = 1.0;
  std::size_t bridge_cells = 0;
  double bridge_min_phi = 1.0;
  std::size_t ring_first = 0;
  std::size_t ring_second = 0;
};

// Fits t2 onto t1 across the collar: t2 cells with a vertex closer to
// collar.center than collar.r_outer are dropped, t1's boundary loop inside the
// collar is zipped to t2's exposed loop by greedy shortest diagonals, and the
// bridge is improved by edge flips. Throws MashError when the two loops
// differ in size by more than max_ring_ratio.
MashResult mash(const SimplicialComplex& t1, const SimplicialComplex& t2, const Region& collar,
                const MashOptions& opts = {});

struct ThickenOptions {
  bool flips = true;
  bool relocate = true;
  // When nonempty, only edges between two marked cells may flip and only
  // vertices all of whose cells are marked may move.
  std::vector<char> active_cells;
};

struct ThickenResult {
  SimplicialComplex complex;
  // Entry 0 is the input; one entry per round after that.
  std::vector<double> min_phi_per_round;
  std::size_t flips = 0;
  std::size_t moves = 0;
};

// Stand-in thickening: per round, a sweep of edge flips that raise the
// smaller thickness of the two cells, then a sweep moving interior vertices
// toward their neighbor centroid (pulled back to M when m is given) when this
// raises the local minimum. Boundary vertices stay put; min phi never drops.
ThickenResult thicken(const SimplicialComplex& t, const EmbeddedManifold* m, int rounds,
                      const ThickenOptions& opts = {});

struct StageReport {
  std::size_t index = 0;
  double r_inner = 0.0;
  double r_outer = 0.0;
  double mesh_inner = 0.0;
  double mesh_outer = 0.0;
  double eta = 0.0;
  double epsilon = 0.0;
  bool eta_bound_satisfied = true;
  RadiusEstimates radii;
  InequalityCheck inequality;
  std::size_t net_size = 0;
  std::size_t vertices = 0;
  std::size_t cells = 0;
  double min_phi = 0.0;
  bool valid = false;
  // Against the next stage; absent for the last one.
  std::optional<GluingCheck> gluing;
};

struct MashReport {
  std::size_t stage = 0;
  double c = 1.0;
  std::size_t bridge_cells = 0;
  double bridge_min_phi = 0.0;
  std::size_t ring_first = 0;
  std::size_t ring_second = 0;
};

struct PipelineResult {
  RunConfig config;
  Point base_point;
  SimplicialComplex mesh;
  ThicknessReport thickness;
  ValidityReport validity;
  std::vector<StageReport> stages;
  std::vector<MashReport> mashes;
  std::vector<double> thicken_history;
  long euler_characteristic = 0;
  std::size_t boundary_loops = 0;
  bool covers_manifold = false;
  bool certified = false;
  std::vector<std::string> warnings;
  double elapsed_seconds = 0.0;
  std::string digest;
};

// Exhaustion, radii, eta schedule, stage meshes, fold-left mash, thickening
// and certification. Deterministic in the config. Stage failures are
// rethrown as StageError.
PipelineResult run_pipeline(const RunConfig& cfg);

// FNV-1a over vertex coordinates and cells.
std::string mesh_digest(const SimplicialComplex& c);

}  // namespace fatmesh
