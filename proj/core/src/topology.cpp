#include "fatmesh/topology.hpp"

#include "fatmesh/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fatmesh {

std::vector<Edge> unique_edges(const SimplicialComplex& c) {
  std::set<Edge> edges;
  for (const auto& cell : c.cells) {
    for (std::size_t a = 0; a < cell.size(); ++a) {
      for (std::size_t b = a + 1; b < cell.size(); ++b) {
        edges.insert({std::min(cell[a], cell[b]), std::max(cell[a], cell[b])});
      }
    }
  }
  return {edges.begin(), edges.end()};
}

long euler_characteristic(const SimplicialComplex& c) {
  std::set<int> used;
  for (const auto& cell : c.cells) used.insert(cell.begin(), cell.end());
  const auto edges = unique_edges(c);
  return static_cast<long>(used.size()) - static_cast<long>(edges.size()) + static_cast<long>(c.cells.size());
}

namespace {

// Directed edge -> number of times it appears across triangles.
std::map<Edge, int> directed_edges(const SimplicialComplex& c) {
  if (c.dim != 2) throw InvalidInputError("orientation queries need a triangle complex");
  std::map<Edge, int> count;
  for (const auto& cell : c.cells) {
    for (int k = 0; k < 3; ++k) ++count[{cell[static_cast<std::size_t>(k)], cell[static_cast<std::size_t>((k + 1) % 3)]}];
  }
  return count;
}

}  // namespace

std::vector<std::vector<int>> boundary_loops(const SimplicialComplex& c) {
  const auto directed = directed_edges(c);
  std::map<int, std::vector<int>> next;
  for (const auto& [e, n] : directed) {
    if (directed.count({e[1], e[0]})) continue;
    next[e[0]].push_back(e[1]);
  }
  for (auto& [v, outs] : next) std::sort(outs.begin(), outs.end());

  std::vector<std::vector<int>> loops;
  std::set<Edge> used;
  for (const auto& [start, outs] : next) {
    for (int first : outs) {
      if (used.count({start, first})) continue;
      std::vector<int> loop{start};
      int cur = start;
      int nxt = first;
      while (true) {
        used.insert({cur, nxt});
        if (nxt == start) break;
        loop.push_back(nxt);
        auto it = next.find(nxt);
        if (it == next.end()) break;
        int pick = -1;
        for (int cand : it->second) {
          if (!used.count({nxt, cand})) {
            pick = cand;
            break;
          }
        }
        if (pick < 0) break;
        cur = nxt;
        nxt = pick;
      }
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

bool is_consistently_oriented(const SimplicialComplex& c) {
  const auto directed = directed_edges(c);
  for (const auto& [e, n] : directed) {
    if (n > 1) return false;
  }
  return true;
}

std::vector<char> boundary_vertex_mask(const SimplicialComplex& c) {
  std::vector<char> mask(c.vertices.size(), 0);
  std::map<Edge, int> undirected;
  for (const auto& cell : c.cells) {
    for (std::size_t a = 0; a < cell.size(); ++a) {
      for (std::size_t b = a + 1; b < cell.size(); ++b) {
        ++undirected[{std::min(cell[a], cell[b]), std::max(cell[a], cell[b])}];
      }
    }
  }
  for (const auto& [e, n] : undirected) {
    if (n == 1) {
      mask[static_cast<std::size_t>(e[0])] = 1;
      mask[static_cast<std::size_t>(e[1])] = 1;
    }
  }
  return mask;
}

SimplicialComplex compact_vertices(const SimplicialComplex& c) {
  std::vector<int> remap(c.vertices.size(), -1);
  for (const auto& cell : c.cells) {
    for (int v : cell) remap[static_cast<std::size_t>(v)] = 0;
  }
  SimplicialComplex out;
  out.dim = c.dim;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (remap[i] < 0) continue;
    remap[i] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(c.vertices[i]);
  }
  out.cells.reserve(c.cells.size());
  for (const auto& cell : c.cells) {
    Cell mapped;
    for (int v : cell) mapped.push_back(remap[static_cast<std::size_t>(v)]);
    out.cells.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace fatmesh
