#include "fatmesh/error.hpp"
#include "fatmesh/pipeline.hpp"
#include "fatmesh/topology.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fatmesh {

namespace {

Eigen::Vector3d lift(const Point& p) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(3, p.size()); ++i) out[i] = p[i];
  return out;
}

double tri_phi(const std::vector<Point>& v, int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return thickness(Simplex({v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)],
                            v[static_cast<std::size_t>(c)]},
                           true));
}

double tri_phi(const std::vector<Point>& v, const Cell& c) { return tri_phi(v, c[0], c[1], c[2]); }

Eigen::Vector3d tri_normal(const Point& a, const Point& b, const Point& c) {
  return (lift(b) - lift(a)).cross(lift(c) - lift(a));
}

Eigen::Vector3d tri_normal(const std::vector<Point>& v, const Cell& c) {
  return tri_normal(v[static_cast<std::size_t>(c[0])], v[static_cast<std::size_t>(c[1])],
                    v[static_cast<std::size_t>(c[2])]);
}

double min_phi(const SimplicialComplex& c) {
  double out = 1.0;
  for (const auto& cell : c.cells) out = std::min(out, tri_phi(c.vertices, cell));
  return out;
}

int third(const Cell& c, int a, int b) {
  for (int v : c) {
    if (v != a && v != b) return v;
  }
  return -1;
}

std::size_t flip_sweep(SimplicialComplex& t, const std::vector<char>& active) {
  std::map<Edge, std::size_t> directed;
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const auto& c = t.cells[i];
    for (int k = 0; k < 3; ++k) directed[{c[static_cast<std::size_t>(k)], c[static_cast<std::size_t>((k + 1) % 3)]}] = i;
  }
  std::size_t flips = 0;
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    if (!active.empty() && !active[i]) continue;
    for (int k = 0; k < 3; ++k) {
      const Cell& ci = t.cells[i];
      const int a = ci[static_cast<std::size_t>(k)];
      const int b = ci[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) continue;
      auto it = directed.find({b, a});
      if (it == directed.end()) continue;
      const std::size_t j = it->second;
      if (!active.empty() && !active[j]) continue;
      const int c = third(ci, a, b);
      const int d = third(t.cells[j], a, b);
      if (c < 0 || d < 0 || c == d) continue;
      if (directed.count({c, d}) || directed.count({d, c})) continue;

      const double before = std::min(tri_phi(t.vertices, ci), tri_phi(t.vertices, t.cells[j]));
      const Cell ni{c, a, d};
      const Cell nj{d, b, c};
      const double after = std::min(tri_phi(t.vertices, ni), tri_phi(t.vertices, nj));
      if (!(after > before + 1e-12)) continue;
      const Eigen::Vector3d ref = tri_normal(t.vertices, ci).normalized() + tri_normal(t.vertices, t.cells[j]).normalized();
      const Eigen::Vector3d n1 = tri_normal(t.vertices, ni);
      const Eigen::Vector3d n2 = tri_normal(t.vertices, nj);
      if (!(n1.dot(ref) > 0.0 && n2.dot(ref) > 0.0 && n1.dot(n2) > 0.0)) continue;

      directed.erase({a, b});
      directed.erase({b, a});
      t.cells[i] = ni;
      t.cells[j] = nj;
      directed[{c, a}] = i;
      directed[{a, d}] = i;
      directed[{d, c}] = i;
      directed[{d, b}] = j;
      directed[{b, c}] = j;
      directed[{c, d}] = j;
      ++flips;
      break;
    }
  }
  return flips;
}

std::size_t relocate_sweep(SimplicialComplex& t, const EmbeddedManifold* m, const std::vector<char>& active) {
  const auto boundary = boundary_vertex_mask(t);
  std::vector<std::vector<std::size_t>> incident(t.vertices.size());
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    for (int v : t.cells[i]) incident[static_cast<std::size_t>(v)].push_back(i);
  }
  std::size_t moves = 0;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    const auto& inc = incident[v];
    if (boundary[v] || inc.empty()) continue;
    if (!active.empty() &&
        std::any_of(inc.begin(), inc.end(), [&](std::size_t c) { return !active[c]; })) {
      continue;
    }
    Point centroid = Point::Zero(t.vertices[v].size());
    std::vector<int> ring;
    for (std::size_t c : inc) {
      for (int w : t.cells[c]) {
        if (static_cast<std::size_t>(w) != v && std::find(ring.begin(), ring.end(), w) == ring.end()) ring.push_back(w);
      }
    }
    for (int w : ring) centroid += t.vertices[static_cast<std::size_t>(w)];
    centroid /= static_cast<double>(ring.size());

    const Point old = t.vertices[v];
    double before = 1.0;
    std::vector<Eigen::Vector3d> normals;
    for (std::size_t c : inc) {
      before = std::min(before, tri_phi(t.vertices, t.cells[c]));
      normals.push_back(tri_normal(t.vertices, t.cells[c]));
    }
    for (double step : {1.0, 0.5}) {
      Point cand = old + step * (centroid - old);
      if (m) {
        try {
          cand = project_to_manifold(*m, cand);
        } catch (const ProjectionError&) {
          continue;
        }
      }
      t.vertices[v] = cand;
      double after = 1.0;
      bool folded = false;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        after = std::min(after, tri_phi(t.vertices, t.cells[inc[k]]));
        folded = folded || !(tri_normal(t.vertices, t.cells[inc[k]]).dot(normals[k]) > 0.0);
      }
      if (!folded && after > before + 1e-12) {
        ++moves;
        break;
      }
      t.vertices[v] = old;
    }
  }
  return moves;
}

double mean_radius(const std::vector<Point>& v, const std::vector<int>& loop, const Point& center) {
  double s = 0.0;
  for (int i : loop) s += (v[static_cast<std::size_t>(i)] - center).norm();
  return s / static_cast<double>(loop.size());
}

}  // namespace

ThickenResult thicken(const SimplicialComplex& t, const EmbeddedManifold* m, int rounds, const ThickenOptions& opts) {
  if (t.dim != 2) throw InvalidInputError("thickening works on triangle complexes");
  ThickenResult out;
  out.complex = t;
  out.min_phi_per_round.push_back(min_phi(out.complex));
  for (int r = 0; r < rounds; ++r) {
    if (opts.flips) out.flips += flip_sweep(out.complex, opts.active_cells);
    if (opts.relocate) out.moves += relocate_sweep(out.complex, m, opts.active_cells);
    out.min_phi_per_round.push_back(min_phi(out.complex));
  }
  return out;
}

MashResult mash(const SimplicialComplex& t1, const SimplicialComplex& t2, const Region& collar, const MashOptions& opts) {
  if (t1.dim != 2 || t2.dim != 2) throw InvalidInputError("mashing works on triangle complexes");
  const Point& center = collar.center;
  const double cut = collar.r_outer;
  const double tol = 1e-9 * (1.0 + cut);

  SimplicialComplex rest;
  rest.dim = 2;
  rest.vertices = t2.vertices;
  for (const auto& cell : t2.cells) {
    const bool outside = std::all_of(cell.begin(), cell.end(), [&](int v) {
      return (t2.vertices[static_cast<std::size_t>(v)] - center).norm() >= cut - tol;
    });
    if (outside) rest.cells.push_back(cell);
  }
  // Trimming can leave pinch vertices with more than two boundary edges,
  // which split the exposed ring; peel the cells around them.
  for (int round = 0; round < 16 && !rest.cells.empty(); ++round) {
    std::map<Edge, int> edge_count;
    for (const auto& cell : rest.cells) {
      for (std::size_t a = 0; a < 3; ++a) {
        const int u = cell[a];
        const int w = cell[(a + 1) % 3];
        edge_count[Edge{std::min(u, w), std::max(u, w)}]++;
      }
    }
    std::map<int, int> boundary_degree;
    for (const auto& [e, n] : edge_count) {
      if (n == 1) {
        boundary_degree[e[0]]++;
        boundary_degree[e[1]]++;
      }
    }
    std::set<int> pinched;
    for (const auto& [v, d] : boundary_degree) {
      if (d > 2) pinched.insert(v);
    }
    if (pinched.empty()) break;
    std::erase_if(rest.cells, [&](const Cell& cell) {
      return std::any_of(cell.begin(), cell.end(), [&](int v) { return pinched.count(v) > 0; });
    });
  }
  rest = compact_vertices(rest);

  MashResult out;
  const auto loops1 = boundary_loops(t1);
  if (rest.cells.empty()) {
    out.complex = t1;
    return out;
  }
  if (loops1.empty()) throw MashError("first triangulation has no boundary to glue along");

  const std::vector<int>* p_loop = nullptr;
  double best = -1.0;
  for (const auto& l : loops1) {
    const double r = mean_radius(t1.vertices, l, center);
    if (r < cut && r > best) {
      best = r;
      p_loop = &l;
    }
  }
  if (!p_loop) throw MashError("no boundary loop of the first triangulation lies inside the collar");

  const auto loops2 = boundary_loops(rest);
  const std::vector<int>* q_loop = nullptr;
  best = std::numeric_limits<double>::infinity();
  for (const auto& l : loops2) {
    const double r = mean_radius(rest.vertices, l, center);
    if (r < best) {
      best = r;
      q_loop = &l;
    }
  }
  if (!q_loop) throw MashError("second triangulation exposes no boundary loop");

  const auto& p = *p_loop;
  std::vector<int> q(q_loop->rbegin(), q_loop->rend());
  out.ring_first = p.size();
  out.ring_second = q.size();
  const double ratio = static_cast<double>(std::max(p.size(), q.size())) /
                       static_cast<double>(std::min(p.size(), q.size()));
  if (ratio > opts.max_ring_ratio) {
    throw MashError("boundary rings of " + std::to_string(p.size()) + " and " + std::to_string(q.size()) +
                    " vertices cannot be bridged; tighten the eta schedule");
  }

  SimplicialComplex merged;
  merged.dim = 2;
  merged.vertices = t1.vertices;
  const int offset = static_cast<int>(t1.vertices.size());
  merged.vertices.insert(merged.vertices.end(), rest.vertices.begin(), rest.vertices.end());
  merged.cells = t1.cells;
  for (const auto& cell : rest.cells) {
    Cell c;
    for (int v : cell) c.push_back(v + offset);
    merged.cells.push_back(std::move(c));
  }
  for (int& v : q) v += offset;

  const auto& pts = merged.vertices;
  auto at = [&](int i) -> const Point& { return pts[static_cast<std::size_t>(i)]; };
  std::size_t start = 0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double d = (at(q[k]) - at(p[0])).norm();
    if (d < nearest) {
      nearest = d;
      start = k;
    }
  }
  std::rotate(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(start), q.end());

  const std::size_t np = p.size();
  const std::size_t nq = q.size();
  const std::size_t bridge_begin = merged.cells.size();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < np || j < nq) {
    const int pi = p[i % np];
    const int pn = p[(i + 1) % np];
    const int qj = q[j % nq];
    const int qn = q[(j + 1) % nq];
    bool advance_p = false;
    if (j == nq) {
      advance_p = true;
    } else if (i < np) {
      advance_p = (at(pn) - at(qj)).norm() <= (at(pi) - at(qn)).norm();
    }
    if (advance_p) {
      merged.cells.push_back({pn, pi, qj});
      ++i;
    } else {
      merged.cells.push_back({qj, qn, pi});
      ++j;
    }
  }
  out.bridge_cells = merged.cells.size() - bridge_begin;

  if (opts.thicken_bridge) {
    ThickenOptions th;
    th.relocate = false;
    th.active_cells.assign(merged.cells.size(), 0);
    std::fill(th.active_cells.begin() + static_cast<std::ptrdiff_t>(bridge_begin), th.active_cells.end(), 1);
    merged = thicken(merged, nullptr, opts.bridge_rounds, th).complex;
  }

  out.bridge_min_phi = 1.0;
  for (std::size_t k = bridge_begin; k < merged.cells.size(); ++k) {
    out.bridge_min_phi = std::min(out.bridge_min_phi, tri_phi(merged.vertices, merged.cells[k]));
  }
  const double reference = std::min(min_phi(t1), min_phi(t2));
  out.c = reference > 0.0 ? min_phi(merged) / reference : 1.0;
  out.complex = std::move(merged);
  return out;
}

}  // namespace fatmesh
