#include "fatmesh/error.hpp"
#include "fatmesh/manifold.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace fatmesh;
using fatmesh::testing::pt;

std::vector<Point> samples_of(const std::string& name, const Region& region, std::size_t n, std::uint64_t seed,
                              const std::map<std::string, double>& params = {}) {
  const auto m = make_manifold(name, params);
  Rng rng(seed);
  return sample_region_n(*m, region, rng, n);
}

TEST(Osculatory, UnitSphere) {
  const auto s = make_manifold("sphere");
  const auto pts = samples_of("sphere", Region{s->default_base_point()}, 1000, 1);
  const auto est = estimate_osculatory_radius(*s, pts);
  EXPECT_FALSE(est.flat);
  EXPECT_NEAR(est.omega, 1.0, 0.05);
}

TEST(Osculatory, CylinderOfRadiusTwo) {
  const auto c = make_manifold("cylinder", {{"radius", 2.0}});
  const auto pts = samples_of("cylinder", Region{c->default_base_point(), 0.0, 3.0}, 1000, 2, {{"radius", 2.0}});
  EXPECT_NEAR(estimate_osculatory_radius(*c, pts, 10.0).omega, 2.0, 0.1);
}

TEST(Osculatory, PlaneIsFlatAndReportsCap) {
  const auto p = make_manifold("plane");
  const auto pts = samples_of("plane", Region{p->default_base_point(), 0.0, 1.0}, 300, 3);
  const auto est = estimate_osculatory_radius(*p, pts, 7.5);
  EXPECT_TRUE(est.flat);
  EXPECT_EQ(est.omega, 7.5);
}

TEST(Osculatory, NeedsTwoSamples) {
  const auto s = make_manifold("sphere");
  const std::vector<Point> one = {pt({1, 0, 0})};
  EXPECT_THROW(estimate_osculatory_radius(*s, one), InvalidInputError);
}

TEST(Osculatory, DenserSamplingDoesNotLoosenTheEstimate) {
  for (const auto& name : {"sphere", "torus", "paraboloid"}) {
    const auto m = make_manifold(name);
    const Region region{m->default_base_point(), 0.0, m->is_compact() ? INFINITY : 1.5};
    const double coarse = estimate_osculatory_radius(*m, samples_of(name, region, 1000, 4), 10.0).omega;
    const double fine = estimate_osculatory_radius(*m, samples_of(name, region, 4000, 5), 10.0).omega;
    EXPECT_LE(fine, coarse * 1.02) << name;
  }
}

TEST(Osculatory, NeverExceedsAnalyticReachByMuch) {
  for (const auto& name : {"sphere", "torus", "paraboloid", "catenoid"}) {
    const auto m = make_manifold(name);
    const Region region{m->default_base_point(), 0.0, m->is_compact() ? INFINITY : 1.5};
    const double est = estimate_osculatory_radius(*m, samples_of(name, region, 1500, 6), 10.0).omega;
    EXPECT_LE(est, *m->analytic_reach() * 1.05) << name;
  }
}

TEST(Connectivity, PlanePatchReachesCap) {
  const auto pts = samples_of("plane", Region{pt({0, 0, 0}), 0.0, 1.0}, 600, 7);
  ConnectivityOptions opts;
  opts.cap = 1.5;
  EXPECT_DOUBLE_EQ(estimate_connectivity_radius(pts, 1.0, opts), 1.5);
}

TEST(Connectivity, ParallelSheetsStayBelowTheirGap) {
  const double d = 0.5;
  auto pts = samples_of("plane", Region{pt({0, 0, 0}), 0.0, 1.0}, 500, 8);
  for (const auto& p : samples_of("plane", Region{pt({0, 0, 0}), 0.0, 1.0}, 500, 9)) pts.push_back(p + pt({0, 0, d}));
  ConnectivityOptions opts;
  opts.cap = 2.0;
  opts.edge_factor = 1.5;
  opts.centers = Region{pt({0, 0, 0}), 0.0, 0.5};
  const double kappa = estimate_connectivity_radius(pts, 1.0, opts);
  EXPECT_GT(kappa, 0.0);
  EXPECT_LT(kappa, d);
}

TEST(Connectivity, SphereSatisfiesTheInequalityNumerically) {
  const auto s = make_manifold("sphere");
  const auto pts = samples_of("sphere", Region{s->default_base_point()}, 1000, 10);
  const double omega = estimate_osculatory_radius(*s, pts).omega;
  const double kappa = estimate_connectivity_radius(pts, omega);
  EXPECT_GE(kappa, 0.9 * std::sqrt(3.0) * omega);
  RadiusEstimates est;
  est.omega = omega;
  est.kappa = kappa;
  EXPECT_TRUE(check_reach_inequality(est).pass);
}

TEST(Connectivity, DisconnectedInputThrows) {
  // The clusters split well inside the first grid step.
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(pt({0.01 * i, 0, 0}));
  for (int i = 0; i < 10; ++i) pts.push_back(pt({0.5 + 0.01 * i, 0, 0}));
  ConnectivityOptions opts;
  opts.cap = 2.0;
  opts.grid = 2;
  EXPECT_THROW(estimate_connectivity_radius(pts, 1.0, opts), ConnectivityError);
}

TEST(Inequality, Arithmetic) {
  RadiusEstimates est;
  est.omega = 1.0;
  est.kappa = 2.0;
  auto r = check_reach_inequality(est);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 2.0 * std::sqrt(3.0) / 3.0 - 1.0, 1e-15);
  est.kappa = 1.0;
  r = check_reach_inequality(est);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.margin, std::sqrt(3.0) / 3.0 - 1.0, 1e-15);
  // Within the 5% slack.
  est.kappa = std::sqrt(3.0) * 1.0 / 1.04;
  EXPECT_TRUE(check_reach_inequality(est).pass);
}

}  // namespace
