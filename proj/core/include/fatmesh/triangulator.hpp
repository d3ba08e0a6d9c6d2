#pragma once

#include "fatmesh/geometry.hpp"
#include "fatmesh/manifold.hpp"
#include "fatmesh/sampling.hpp"
#include "fatmesh/topology.hpp"

#include <cstdint>
#include <vector>

namespace fatmesh {

struct DirichletOptions {
  // Witness samples per site.
  double density = 40.0;
  std::uint64_t seed = 0;
  // Witnesses of different owners closer than this many spacings make their
  // owners adjacent.
  double adjacency_factor = 2.0;
};

// Nearest-site decomposition of a region of M, realized on a random witness
// sample.
struct DirichletComplex {
  std::vector<Point> sites;
  Region region;
  std::vector<Point> witnesses;
  std::vector<int> owner;
  std::vector<std::size_t> cell_sizes;
  // Sorted (lo, hi) pairs of sites whose cells share a wall.
  std::vector<Edge> adjacency;
  // Mean nearest-neighbor distance among witnesses.
  double spacing = 0.0;
  // Largest witness-to-owner distance, an estimate of the covering radius.
  double covering_radius = 0.0;
};

// Throws DensityError naming the first site whose cell received no witness.
DirichletComplex dirichlet_complex(std::span<const Point> sites, const Region& region, const EmbeddedManifold& m,
                                   const DirichletOptions& opts = {});

inline DirichletComplex dirichlet_complex(const Net& net, const Region& region, const EmbeddedManifold& m,
                                          const DirichletOptions& opts = {}) {
  return dirichlet_complex(net.points, region, m, opts);
}

struct DualOptions {
  // Star-fill short boundary loops away from the region boundary with a
  // barycenter vertex.
  bool fill_holes = true;
  std::size_t max_hole = 8;
};

struct DualComplex {
  SimplicialComplex complex;
  // Adjacent site pairs that bound no cell.
  std::vector<Edge> free_edges;
  // Indices of vertices added by hole filling.
  std::vector<std::size_t> steiner;
  // Radius of the empty sphere witnessing each cell.
  std::vector<double> circumradii;
  ValidityReport validity;
};

// Restricted Delaunay dual: a tuple of n+1 sites is a cell when M carries a
// point of equal power to all of them, inside the region, with no site of
// smaller power. Ties are broken by a deterministic per-site weight.
// Codimension-1 cells are oriented along grad F. Throws DegeneracyError when
// an edge ends up shared by more than two cells.
DualComplex dual_complex(const DirichletComplex& dc, const EmbeddedManifold& m, const DualOptions& opts = {});

// Pushes every vertex onto M with the normal map and revalidates.
DualComplex project_dual(const DualComplex& gamma, const EmbeddedManifold& m);

struct FatnessVerdict {
  ThicknessReport report;
  bool pass = false;
};

FatnessVerdict verify_fatness(const DualComplex& gamma, double phi0);
FatnessVerdict verify_fatness(const SimplicialComplex& c, double phi0);

}  // namespace fatmesh
