#include "fatmesh/sampling.hpp"

#include "fatmesh/error.hpp"
#include "point_grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace fatmesh {

EtaSchedule build_eta_schedule(std::span<const OmegaTriple> stage_omegas, const ScheduleOptions& opts) {
  if (stage_omegas.empty()) throw InvalidInputError("eta schedule needs at least one stage");
  if (!(opts.decay >= 0.5 && opts.decay < 1.0)) throw InvalidInputError("decay must lie in [0.5, 1)");
  EtaSchedule out;
  out.stage_omegas.assign(stage_omegas.begin(), stage_omegas.end());
  for (std::size_t i = 0; i < stage_omegas.size(); ++i) {
    const auto& t = stage_omegas[i];
    if (!(std::min({t[0], t[1], t[2]}) > 0.0)) {
      throw InvalidInputError("osculatory radii must be positive (stage " + std::to_string(i + 1) + ")");
    }
    const double bound = 0.25 * std::min({t[0], t[1], t[2]});
    double eta = 0.0;
    if (opts.initial_eta) {
      eta = i == 0 ? *opts.initial_eta : out.etas.back() * opts.decay;
      if (opts.enforce_omega_bound && eta > bound * (1.0 + 1e-12)) {
        throw ScheduleInfeasibleError(
            "stage " + std::to_string(i + 1) + ": eta exceeds a quarter of the osculatory radius", i + 1);
      }
    } else if (i == 0) {
      eta = bound;
    } else {
      const double prev = out.etas.back();
      if (bound < 0.5 * prev) {
        throw ScheduleInfeasibleError("stage " + std::to_string(i + 1) +
                                          ": osculatory radius drops faster than the mesh size may halve",
                                      i + 1);
      }
      eta = bound < prev ? bound : prev * opts.decay;
    }
    out.etas.push_back(eta);
    out.bound_satisfied.push_back(eta <= bound * (1.0 + 1e-12) ? 1 : 0);
  }
  return out;
}

namespace {

class NetBuilder {
 public:
  NetBuilder(const Region& region, double epsilon, const NetOptions& opts)
      : region_(region), eps_(epsilon), opts_(opts), grid_(epsilon) {}

  double nearest(const Point& x) const {
    double best = std::numeric_limits<double>::infinity();
    grid_.visit(x, 1, [&](int id) { best = std::min(best, (pts_[static_cast<std::size_t>(id)] - x).norm()); });
    return best;
  }

  bool try_add(const Point& x, bool strict) {
    const double d = nearest(x);
    if (strict ? !(d > eps_) : !(d >= eps_)) return false;
    if (pts_.size() >= opts_.max_points) {
      throw InvalidInputError("net exceeds max_points; epsilon is too small for the region");
    }
    grid_.insert(x, static_cast<int>(pts_.size()));
    pts_.push_back(x);
    return true;
  }

  bool in_region(const Point& x) const { return region_.contains(x, 1e-12 * (1.0 + x.norm())); }

  std::vector<int> neighbors(std::size_t i, double r) const { return grid_.within(pts_, pts_[i], r); }

  std::vector<Point>& points() { return pts_; }

 private:
  const Region& region_;
  double eps_;
  const NetOptions& opts_;
  detail::PointGrid grid_;
  std::vector<Point> pts_;
};

// Interior Voronoi vertices among sites, restricted to those involving at
// least one index >= first_new.
std::vector<Point> interior_holes(const EmbeddedManifold& m, NetBuilder& b, std::size_t first_new, double eps) {
  std::vector<Point> out;
  auto& pts = b.points();
  const int n = m.intrinsic_dim();
  const double reach = 3.0 * eps;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto nb = b.neighbors(i, reach);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::remove_if(nb.begin(), nb.end(), [&](int j) { return static_cast<std::size_t>(j) <= i; }), nb.end());
    if (n == 1) {
      for (int j : nb) {
        if (std::max(i, static_cast<std::size_t>(j)) < first_new) continue;
        const std::array<Point, 2> s{pts[i], pts[static_cast<std::size_t>(j)]};
        if (auto x = equal_power_point(m, s, {})) out.push_back(*x);
      }
      continue;
    }
    if (n != 2) continue;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t c = a + 1; c < nb.size(); ++c) {
        const auto j = static_cast<std::size_t>(nb[a]);
        const auto k = static_cast<std::size_t>(nb[c]);
        if (std::max({i, j, k}) < first_new) continue;
        if ((pts[j] - pts[k]).norm() > reach) continue;
        const Point u = pts[j] - pts[i];
        const Point v = pts[k] - pts[i];
        const double uu = u.squaredNorm();
        const double vv = v.squaredNorm();
        const double uv = u.dot(v);
        const double det = uu * vv - uv * uv;
        if (det <= 1e-12 * uu * vv) continue;
        // Ambient circumradius of the triangle.
        const double alpha = vv * (uu - uv) / (2.0 * det);
        const double beta = uu * (vv - uv) / (2.0 * det);
        const double r = (alpha * u + beta * v).norm();
        if (r < 0.8 * eps) continue;
        const std::array<Point, 3> s{pts[i], pts[j], pts[k]};
        if (auto x = equal_power_point(m, s, {})) out.push_back(*x);
      }
    }
  }
  return out;
}

// Points of the region boundary equidistant from two sites (n = 2) or the
// boundary points themselves (n = 1).
std::vector<Point> boundary_holes(const EmbeddedManifold& m, const Region& region, NetBuilder& b,
                                  std::size_t first_new, double eps) {
  std::vector<Point> out;
  std::vector<double> radii;
  if (region.has_inner_boundary()) radii.push_back(region.r_inner);
  if (region.has_outer_boundary()) radii.push_back(region.r_outer);
  auto& pts = b.points();
  const int n = m.intrinsic_dim();
  for (double rb : radii) {
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs((pts[i] - region.center).norm() - rb) <= 2.0 * eps) near.push_back(i);
    }
    if (n == 1) {
      for (std::size_t i : near) {
        if (i < first_new) continue;
        if (auto x = solve_on_manifold(m, {}, &region.center, rb, pts[i])) out.push_back(*x);
      }
      continue;
    }
    if (n != 2) continue;
    for (std::size_t a = 0; a < near.size(); ++a) {
      for (std::size_t c = a + 1; c < near.size(); ++c) {
        const std::size_t i = near[a];
        const std::size_t j = near[c];
        if (std::max(i, j) < first_new) continue;
        if ((pts[i] - pts[j]).norm() > 3.0 * eps) continue;
        const LinearConstraint bis{2.0 * (pts[j] - pts[i]), pts[j].squaredNorm() - pts[i].squaredNorm()};
        const Point mid = 0.5 * (pts[i] + pts[j]);
        if (auto x = solve_on_manifold(m, std::span(&bis, 1), &region.center, rb, mid)) out.push_back(*x);
      }
    }
  }
  return out;
}

}  // namespace

Net maximal_net(const EmbeddedManifold& m, const Region& region, double epsilon, std::uint64_t seed,
                const NetOptions& opts, std::size_t stage) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInputError("net epsilon must be positive");
  Net net;
  net.epsilon = epsilon;
  net.stage = stage;
  net.seed = seed;
  if (region.is_point()) {
    net.points.push_back(region.center);
    return net;
  }

  Rng rng(seed);
  NetBuilder b(region, epsilon, opts);
  for (const auto& p : opts.seed_points) b.try_add(p, false);
  net.seeded = b.points().size();

  bool any_sample = false;
  int streak = 0;
  while (streak < opts.rejection_streak) {
    auto x = sample_region(m, region, rng);
    if (!x) {
      if (!any_sample && b.points().empty()) throw EmptyRegionError("no sample landed in the net region");
      ++streak;
      continue;
    }
    any_sample = true;
    streak = b.try_add(*x, false) ? 0 : streak + 1;
  }
  if (b.points().empty()) throw EmptyRegionError("net region is empty");

  std::size_t first_new = 0;
  for (int round = 0; round < opts.refinement_rounds; ++round) {
    const std::size_t before = b.points().size();
    for (const auto& x : interior_holes(m, b, first_new, epsilon)) {
      if (b.in_region(x)) b.try_add(x, true);
    }
    for (const auto& x : boundary_holes(m, region, b, first_new, epsilon)) {
      if (b.in_region(x)) b.try_add(x, true);
    }
    const auto checks = static_cast<std::size_t>(opts.verification_factor * static_cast<double>(b.points().size()));
    for (std::size_t k = 0; k < checks; ++k) {
      if (auto x = sample_region(m, region, rng)) b.try_add(*x, true);
    }
    if (b.points().size() == before) break;
    first_new = before;
  }
  net.points = std::move(b.points());
  return net;
}

SeparationCheck check_separation(std::span<const Point> points, double epsilon) {
  SeparationCheck out;
  out.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = (points[i] - points[j]).norm();
      if (d < out.min_distance) {
        out.min_distance = d;
        out.first = i;
        out.second = j;
      }
    }
  }
  out.pass = out.min_distance >= epsilon * (1.0 - 1e-12);
  return out;
}

CoveringCheck check_covering(std::span<const Point> points, std::span<const Point> tests, double epsilon) {
  CoveringCheck out;
  out.tested = tests.size();
  for (const auto& t : tests) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, (p - t).squaredNorm());
    out.max_distance = std::max(out.max_distance, std::sqrt(best));
  }
  out.pass = out.max_distance <= epsilon * (1.0 + 1e-12);
  return out;
}

GluingCheck check_gluing(const EmbeddedManifold& m, const Net& first, const Net& second, const Region& band,
                         std::uint64_t seed, std::size_t test_points) {
  GluingCheck out;
  out.band_width = band.is_point() ? 0.0 : band.r_outer - band.r_inner;
  out.required_width = 2.0 * std::max(2.0 * first.epsilon, 2.0 * second.epsilon);
  const bool wide = out.band_width >= out.required_width * (1.0 - 1e-12);
  if (!wide) return out;
  Rng rng(seed);
  const auto tests = sample_region_n(m, band, rng, test_points);
  out.cover_first = check_covering(first.points, tests, first.epsilon);
  out.cover_second = check_covering(second.points, tests, second.epsilon);
  out.pass = out.cover_first.pass && out.cover_second.pass;
  return out;
}

}  // namespace fatmesh
