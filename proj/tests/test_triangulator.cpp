#include "fatmesh/error.hpp"
#include "fatmesh/triangulator.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace fatmesh;
using fatmesh::testing::pt;

std::vector<Point> tetrahedral_sites() {
  auto v = fatmesh::testing::regular_tetrahedron(1.0);
  for (auto& p : v) p.normalize();
  return v;
}


TEST(Dirichlet, TwoSitesSplitAlongTheBisector) {
  const auto plane = make_manifold("plane");
  const std::vector<Point> sites = {pt({-0.5, 0, 0}), pt({0.5, 0, 0})};
  const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane);
  ASSERT_EQ(dc.adjacency.size(), 1u);
  EXPECT_EQ(dc.adjacency.front(), (Edge{0, 1}));
  for (std::size_t i = 0; i < dc.witnesses.size(); ++i) {
    EXPECT_EQ(dc.owner[i], dc.witnesses[i][0] < 0.0 ? 0 : 1);
  }
  EXPECT_GT(dc.cell_sizes[0], 0u);
  EXPECT_GT(dc.cell_sizes[1], 0u);
}

TEST(Dirichlet, TetrahedralSitesOnSphere) {
  const auto s = make_manifold("sphere");
  const auto sites = tetrahedral_sites();
  DirichletOptions opts;
  opts.density = 500;
  const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0})}, *s, opts);
  EXPECT_EQ(dc.adjacency.size(), 6u);
  // Owners agree with a brute-force nearest-site search.
  for (std::size_t i = 0; i < dc.witnesses.size(); ++i) {
    int best = 0;
    for (int k = 1; k < 4; ++k) {
      if ((dc.witnesses[i] - sites[static_cast<std::size_t>(k)]).norm() <
          (dc.witnesses[i] - sites[static_cast<std::size_t>(best)]).norm()) {
        best = k;
      }
    }
    EXPECT_EQ(dc.owner[i], best);
  }
  // Congruent cells collect comparable shares of a uniform sample.
  for (auto n : dc.cell_sizes) EXPECT_NEAR(static_cast<double>(n) / dc.witnesses.size(), 0.25, 0.04);
}

TEST(Dirichlet, SingleSite) {
  const auto plane = make_manifold("plane");
  const std::vector<Point> sites = {pt({0, 0, 0})};
  const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane);
  EXPECT_TRUE(dc.adjacency.empty());
  EXPECT_EQ(dc.cell_sizes.size(), 1u);
  EXPECT_EQ(dc.cell_sizes.front(), dc.witnesses.size());
}

TEST(Dirichlet, StarvedCellNamesItsSite) {
  const auto plane = make_manifold("plane");
  const std::vector<Point> sites = {pt({0, 0, 0}), pt({5, 0, 0})};
  try {
    dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane);
    FAIL() << "expected DensityError";
  } catch (const DensityError& e) {
    EXPECT_EQ(e.site(), 1u);
  }
}

TEST(Dual, TetrahedralSitesGiveATetrahedron) {
  const auto s = make_manifold("sphere");
  const auto dc = dirichlet_complex(tetrahedral_sites(), Region{pt({0, 0, 0})}, *s);
  const auto gamma = dual_complex(dc, *s);
  EXPECT_EQ(gamma.complex.cells.size(), 4u);
  EXPECT_EQ(euler_characteristic(gamma.complex), 2);
  EXPECT_TRUE(gamma.validity.valid);
  EXPECT_TRUE(is_consistently_oriented(gamma.complex));
  EXPECT_TRUE(gamma.free_edges.empty());
  // Outward orientation.
  for (const auto& c : gamma.complex.cells) {
    const Eigen::Vector3d a = gamma.complex.vertices[static_cast<std::size_t>(c[0])];
    const Eigen::Vector3d b = gamma.complex.vertices[static_cast<std::size_t>(c[1])];
    const Eigen::Vector3d d = gamma.complex.vertices[static_cast<std::size_t>(c[2])];
    EXPECT_GT((b - a).cross(d - a).dot(a + b + d), 0.0);
  }
}

TEST(Dual, ThreePlanarSitesGiveOneTriangle) {
  const auto plane = make_manifold("plane");
  const std::vector<Point> sites = {pt({-0.4, -0.3, 0}), pt({0.4, -0.3, 0}), pt({0, 0.4, 0})};
  const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane);
  EXPECT_EQ(dc.adjacency.size(), 3u);
  const auto gamma = dual_complex(dc, *plane);
  ASSERT_EQ(gamma.complex.cells.size(), 1u);
  EXPECT_TRUE(gamma.free_edges.empty());
}

TEST(Dual, CollinearSitesGiveOnlyEdges) {
  const auto plane = make_manifold("plane");
  std::vector<Point> sites;
  for (int i = 0; i < 5; ++i) sites.push_back(pt({-0.8 + 0.4 * i, 0, 0}));
  const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane);
  const auto gamma = dual_complex(dc, *plane);
  EXPECT_TRUE(gamma.complex.cells.empty());
  EXPECT_EQ(gamma.free_edges.size(), 4u);
  EXPECT_TRUE(gamma.steiner.empty());
}

TEST(Dual, FlatPatchMatchesBruteForceDelaunay) {
  const auto plane = make_manifold("plane");
  DirichletOptions dopt;
  dopt.density = 200;
  DualOptions opts;
  opts.fill_holes = false;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto sites = fatmesh::testing::uniform_disk(80, seed);
    const auto dc = dirichlet_complex(sites, Region{pt({0, 0, 0}), 0.0, 1.0}, *plane, dopt);
    const auto gamma = dual_complex(dc, *plane, opts);
    EXPECT_EQ(fatmesh::testing::sorted_cells(gamma.complex), fatmesh::testing::brute_delaunay(sites, 0, 0, 1.0))
        << "seed " << seed;
    EXPECT_TRUE(gamma.validity.valid);
  }
}

class SphereNet : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    sphere = make_manifold("sphere");
    net = maximal_net(*sphere, Region{pt({0, 0, 0})}, 0.2, 11);
    gamma = dual_complex(dirichlet_complex(net, Region{pt({0, 0, 0})}, *sphere), *sphere);
  }
  static inline ManifoldPtr sphere;
  static inline Net net;
  static inline DualComplex gamma;
};

TEST_F(SphereNet, ClosedValidGenusZero) {
  EXPECT_TRUE(gamma.validity.valid);
  EXPECT_EQ(euler_characteristic(gamma.complex), 2);
  EXPECT_TRUE(boundary_loops(gamma.complex).empty());
  EXPECT_TRUE(is_consistently_oriented(gamma.complex));
}

TEST_F(SphereNet, CircumradiiRespectTheCoveringBound) {
  ASSERT_EQ(gamma.circumradii.size(), gamma.complex.cells.size());
  for (double r : gamma.circumradii) EXPECT_LE(r, 1.1 * net.epsilon);
}

TEST_F(SphereNet, ProjectionKeepsThicknessWithinFactorTwo) {
  const auto tilde = project_dual(gamma, *sphere);
  EXPECT_EQ(tilde.complex.cells, gamma.complex.cells);
  const double before = complex_thickness(gamma.complex).min_thickness;
  const double after = complex_thickness(tilde.complex).min_thickness;
  EXPECT_GE(after / before, 0.5);
  EXPECT_LE(after / before, 2.0);
  for (const auto& v : tilde.complex.vertices) EXPECT_LT(std::abs(v.norm() - 1.0), 1e-10);
}

TEST(ProjectDual, OnSurfaceIsIdentity) {
  const auto s = make_manifold("sphere");
  const auto gamma = dual_complex(dirichlet_complex(tetrahedral_sites(), Region{pt({0, 0, 0})}, *s), *s);
  const auto tilde = project_dual(gamma, *s);
  for (std::size_t i = 0; i < gamma.complex.vertices.size(); ++i) {
    EXPECT_LT((tilde.complex.vertices[i] - gamma.complex.vertices[i]).norm(), 1e-12);
  }
  EXPECT_EQ(tilde.complex.cells, gamma.complex.cells);
}

TEST(ProjectDual, SteinerBarycenterMovesOntoSurface) {
  const auto s = make_manifold("sphere");
  DualComplex gamma;
  const auto sites = tetrahedral_sites();
  gamma.complex.vertices = sites;
  const Point bary = (sites[0] + sites[1] + sites[2]) / 3.0;
  gamma.complex.vertices.push_back(bary);
  gamma.complex.cells = {{0, 1, 4}, {1, 2, 4}, {2, 0, 4}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}};
  gamma.steiner = {4};
  const auto tilde = project_dual(gamma, *s);
  EXPECT_EQ(tilde.complex.cells, gamma.complex.cells);
  EXPECT_LT((tilde.complex.vertices[4] - bary.normalized()).norm(), 1e-10);
  EXPECT_TRUE(tilde.validity.valid);
}

TEST(Verify, Fatness) {
  const auto patch = fatmesh::testing::lattice_patch(4, 4);
  EXPECT_TRUE(verify_fatness(patch, 0.3).pass);
  EXPECT_TRUE(verify_fatness(patch, 0.0).pass);

  // A sliver with phi = 0.01: base 1, height 0.02.
  SimplicialComplex sliver;
  sliver.vertices = {pt({0, 0, 0}), pt({1, 0, 0}), pt({0.5, 0.02, 0}), pt({0.5, -0.9, 0})};
  sliver.cells = {{0, 2, 1}, {0, 1, 3}};
  const auto v = verify_fatness(sliver, 0.05);
  EXPECT_NEAR(v.report.min_thickness, 0.01, 1e-12);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.report.argmin_cell, 0u);
}

}  // namespace
