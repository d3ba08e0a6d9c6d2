#include "fatmesh/topology.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace fatmesh;
using fatmesh::testing::pt;

TEST(Topology, ClosedSurfacesHaveEulerTwoAndNoBoundary) {
  for (const auto& c : {fatmesh::testing::tetrahedron_surface(), fatmesh::testing::icosahedron()}) {
    EXPECT_EQ(euler_characteristic(c), 2);
    EXPECT_TRUE(boundary_loops(c).empty());
    EXPECT_TRUE(is_consistently_oriented(c));
  }
  EXPECT_EQ(unique_edges(fatmesh::testing::icosahedron()).size(), 30u);
}

TEST(Topology, DiskHasOneBoundaryLoop) {
  const auto c = fatmesh::testing::lattice_patch(4, 5);
  EXPECT_EQ(euler_characteristic(c), 1);
  const auto loops = boundary_loops(c);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(loops.front().size(), 2u * (4 + 5) - 4u);
  EXPECT_TRUE(is_consistently_oriented(c));
  const auto mask = boundary_vertex_mask(c);
  std::size_t count = 0;
  for (char b : mask) count += b ? 1 : 0;
  EXPECT_EQ(count, loops.front().size());
}

TEST(Topology, FlippedCellBreaksOrientation) {
  auto c = fatmesh::testing::lattice_patch(3, 3);
  std::swap(c.cells[1][0], c.cells[1][1]);
  EXPECT_FALSE(is_consistently_oriented(c));
}

TEST(Topology, NonManifoldEdgeIsNotConsistent) {
  SimplicialComplex c;
  c.vertices = {pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0}), pt({0, -1, 0}), pt({0, 0, 1})};
  c.cells = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
  EXPECT_FALSE(is_consistently_oriented(c));
}

TEST(Topology, CompactVerticesKeepsOrder) {
  SimplicialComplex c;
  c.vertices = {pt({0, 0}), pt({9, 9}), pt({1, 0}), pt({0, 1})};
  c.cells = {{0, 2, 3}};
  const auto d = compact_vertices(c);
  ASSERT_EQ(d.vertices.size(), 3u);
  EXPECT_EQ(d.vertices[1], c.vertices[2]);
  EXPECT_EQ(d.cells.front(), (Cell{0, 1, 2}));
  EXPECT_EQ(euler_characteristic(c), 1);
}

}  // namespace
