#pragma once

#include "fatmesh/geometry.hpp"

#include <array>
#include <vector>

namespace fatmesh {

using Edge = std::array<int, 2>;

// Unique undirected edges of a triangle or edge complex, each stored (lo, hi)
// and sorted.
std::vector<Edge> unique_edges(const SimplicialComplex& c);

// V - E + F over vertices actually referenced by cells (triangle complexes).
long euler_characteristic(const SimplicialComplex& c);

// Closed boundary loops of an oriented triangle complex. Each loop follows
// the direction boundary edges carry in their triangle.
std::vector<std::vector<int>> boundary_loops(const SimplicialComplex& c);

// Every interior edge is traversed once in each direction and no edge is
// shared by more than two triangles.
bool is_consistently_oriented(const SimplicialComplex& c);

// Vertices of boundary edges.
std::vector<char> boundary_vertex_mask(const SimplicialComplex& c);

// Drops unreferenced vertices, preserving the relative order of the rest.
SimplicialComplex compact_vertices(const SimplicialComplex& c);

}  // namespace fatmesh
