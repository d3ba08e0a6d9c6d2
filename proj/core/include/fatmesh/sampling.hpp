#pragma once

#include "fatmesh/manifold.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fatmesh {

// Osculatory radii of U_{i-1}, U_i, U_{i+1} as seen from stage i.
using OmegaTriple = std::array<double, 3>;

struct ScheduleOptions {
  // Factor applied when the curvature bound would leave eta constant.
  double decay = 0.9;
  // Forces eta_1 and then eta_i = initial_eta * decay^(i-1).
  std::optional<double> initial_eta;
  // With initial_eta set, throw when a stage exceeds 1/4 of its omega triple.
  bool enforce_omega_bound = true;
};

struct EtaSchedule {
  std::vector<double> etas;
  std::vector<OmegaTriple> stage_omegas;
  // eta_i <= min(triple_i) / 4, per stage.
  std::vector<char> bound_satisfied;
};

// Largest schedule that is strictly decreasing, has 2 eta_i >= eta_{i-1}, and
// stays under a quarter of each stage's omega triple. Throws
// ScheduleInfeasibleError (1-based stage) when the quarter bound drops below
// half the previous eta.
EtaSchedule build_eta_schedule(std::span<const OmegaTriple> stage_omegas, const ScheduleOptions& opts = {});

struct Net {
  std::vector<Point> points;
  double epsilon = 0.0;
  std::size_t stage = 0;
  std::uint64_t seed = 0;
  // Leading points copied from NetOptions::seed_points.
  std::size_t seeded = 0;
};

struct NetOptions {
  int rejection_streak = 500;
  // Hole-filling passes after the greedy stream.
  int refinement_rounds = 8;
  // Random verification candidates per round, per accepted point.
  double verification_factor = 20.0;
  // Points inserted first (greedily, in order), e.g. a net of the region
  // boundary. They need not lie in the region.
  std::vector<Point> seed_points;
  std::size_t max_points = 500000;
};

// Maximal epsilon-separated subset of the region: a seeded greedy stream run
// until rejection_streak consecutive rejections, then refined by inserting
// sampled Voronoi vertices (interior triple points and boundary points
// equidistant from two sites) that sit farther than epsilon from the net.
// Throws EmptyRegionError when no candidate lands in the region.
Net maximal_net(const EmbeddedManifold& m, const Region& region, double epsilon, std::uint64_t seed,
                const NetOptions& opts = {}, std::size_t stage = 0);

struct SeparationCheck {
  bool pass = true;
  double min_distance = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

// All pairs at distance >= epsilon (relative tolerance 1e-12).
SeparationCheck check_separation(std::span<const Point> points, double epsilon);

struct CoveringCheck {
  bool pass = true;
  double max_distance = 0.0;
  std::size_t tested = 0;
};

// Every test point within epsilon (relative tolerance 1e-12) of the set.
CoveringCheck check_covering(std::span<const Point> points, std::span<const Point> tests, double epsilon);

struct GluingCheck {
  bool pass = false;
  double band_width = 0.0;
  double required_width = 0.0;
  CoveringCheck cover_first;
  CoveringCheck cover_second;
};

// Consecutive nets glue when the band is at least 2 max(eta_i, eta_{i+1})
// wide (inclusive) and each net covers it at its own epsilon. eta = 2 epsilon.
GluingCheck check_gluing(const EmbeddedManifold& m, const Net& first, const Net& second, const Region& band,
                         std::uint64_t seed, std::size_t test_points = 10000);

}  // namespace fatmesh
