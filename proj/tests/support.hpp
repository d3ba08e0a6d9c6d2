#pragma once

// Independent oracles and fixtures shared by the test binaries. Nothing here
// calls into the library's geometry code.

#include "fatmesh/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <numbers>
#include <set>
#include <vector>

namespace fatmesh::testing {

inline Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

// k-volume of the hull of k+1 points from the Gram determinant of the edge
// vectors: sqrt(det(B^T B)) / k!.
inline double gram_volume(const std::vector<Point>& v) {
  const auto k = static_cast<Eigen::Index>(v.size()) - 1;
  if (k == 0) return 1.0;
  Eigen::MatrixXd b(v[0].size(), k);
  for (Eigen::Index i = 0; i < k; ++i) b.col(i) = v[static_cast<std::size_t>(i + 1)] - v[0];
  const double det = (b.transpose() * b).determinant();
  double fact = 1.0;
  for (Eigen::Index i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  return std::sqrt(std::max(det, 0.0)) / fact;
}

inline double brute_diameter(const std::vector<Point>& v) {
  double d = 0.0;
  for (const auto& a : v) {
    for (const auto& b : v) d = std::max(d, (a - b).norm());
  }
  return d;
}

// min over every nonempty vertex subset of gram_volume / diam^j.
inline double gram_thickness(const std::vector<Point>& v) {
  double best = 1.0;
  const auto n = v.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Point> face;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) face.push_back(v[i]);
    }
    if (face.size() == 1) continue;
    const double j = static_cast<double>(face.size() - 1);
    best = std::min(best, gram_volume(face) / std::pow(brute_diameter(face), j));
  }
  return best;
}

inline std::vector<Point> random_simplex(std::mt19937_64& rng, int k, int nu) {
  std::normal_distribution<double> g;
  std::vector<Point> v;
  for (int i = 0; i <= k; ++i) {
    Point p(nu);
    for (int d = 0; d < nu; ++d) p[d] = g(rng);
    v.push_back(p);
  }
  return v;
}

inline Eigen::MatrixXd random_rotation(std::mt19937_64& rng, int nu) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(nu, nu);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nu; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

inline std::vector<Point> regular_tetrahedron(double edge) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  return {pt({s, s, s}), pt({s, -s, -s}), pt({-s, s, -s}), pt({-s, -s, s})};
}

inline std::vector<Point> equilateral(double edge) {
  return {pt({0, 0}), pt({edge, 0}), pt({edge / 2, edge * std::sqrt(3.0) / 2})};
}

// Boundary of a regular tetrahedron, outward oriented.
inline SimplicialComplex tetrahedron_surface() {
  SimplicialComplex c;
  c.vertices = regular_tetrahedron(1.0);
  c.cells = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  c.dim = 2;
  return c;
}

inline SimplicialComplex icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SimplicialComplex c;
  c.vertices = {pt({-1, t, 0}), pt({1, t, 0}), pt({-1, -t, 0}), pt({1, -t, 0}),
                pt({0, -1, t}), pt({0, 1, t}), pt({0, -1, -t}), pt({0, 1, -t}),
                pt({t, 0, -1}), pt({t, 0, 1}), pt({-t, 0, -1}), pt({-t, 0, 1})};
  c.cells = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  c.dim = 2;
  return c;
}

// Planar triangular lattice, rows x cols vertices, in R^3 at z = 0.
inline SimplicialComplex lattice_patch(int rows, int cols, double edge = 1.0) {
  SimplicialComplex c;
  c.dim = 2;
  for (int r = 0; r < rows; ++r) {
    for (int q = 0; q < cols; ++q) {
      c.vertices.push_back(pt({edge * (q + 0.5 * (r % 2)), edge * r * std::sqrt(3.0) / 2.0, 0.0}));
    }
  }
  auto id = [&](int r, int q) { return r * cols + q; };
  for (int r = 0; r + 1 < rows; ++r) {
    for (int q = 0; q + 1 < cols; ++q) {
      if (r % 2 == 0) {
        c.cells.push_back({id(r, q), id(r, q + 1), id(r + 1, q)});
        c.cells.push_back({id(r, q + 1), id(r + 1, q + 1), id(r + 1, q)});
      } else {
        c.cells.push_back({id(r, q), id(r + 1, q + 1), id(r + 1, q)});
        c.cells.push_back({id(r, q), id(r, q + 1), id(r + 1, q + 1)});
      }
    }
  }
  return c;
}

// Brute-force planar Delaunay: every triple whose circumcircle is empty of the
// other sites and whose circumcenter lies inside the disk (cx, cy, radius).
// Only the x and y coordinates are read.
inline std::set<std::array<int, 3>> brute_delaunay(const std::vector<Point>& s, double cx, double cy,
                                                   double radius) {
  std::set<std::array<int, 3>> out;
  const int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double ax = s[i][0], ay = s[i][1];
        const double bx = s[j][0] - ax, by = s[j][1] - ay;
        const double qx = s[k][0] - ax, qy = s[k][1] - ay;
        const double d = 2.0 * (bx * qy - by * qx);
        if (std::abs(d) < 1e-14) continue;
        const double b2 = bx * bx + by * by;
        const double q2 = qx * qx + qy * qy;
        const double ux = (qy * b2 - by * q2) / d + ax;
        const double uy = (bx * q2 - qx * b2) / d + ay;
        if (std::hypot(ux - cx, uy - cy) > radius) continue;
        const double r2 = (ux - ax) * (ux - ax) + (uy - ay) * (uy - ay);
        bool empty = true;
        for (int l = 0; l < n && empty; ++l) {
          if (l == i || l == j || l == k) continue;
          const double dl = (s[l][0] - ux) * (s[l][0] - ux) + (s[l][1] - uy) * (s[l][1] - uy);
          if (dl < r2) empty = false;
        }
        if (empty) out.insert({i, j, k});
      }
    }
  }
  return out;
}

inline std::set<std::array<int, 3>> sorted_cells(const SimplicialComplex& c) {
  std::set<std::array<int, 3>> out;
  for (const auto& cell : c.cells) {
    std::array<int, 3> t{cell[0], cell[1], cell[2]};
    std::sort(t.begin(), t.end());
    out.insert(t);
  }
  return out;
}

// Concentric rings in the z = 0 plane, consecutive rings zipped by angle.
// radii[0] == 0 puts a single center vertex first.
inline SimplicialComplex ring_mesh(const std::vector<double>& radii, const std::vector<int>& counts) {
  SimplicialComplex c;
  std::vector<std::vector<int>> rings;
  std::vector<std::vector<double>> angles;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::vector<int> ids;
    std::vector<double> th;
    const int n = radii[k] == 0.0 ? 1 : counts[k];
    const double offset = (k % 2) * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
      const double a = offset + 2.0 * std::numbers::pi * i / n;
      ids.push_back(static_cast<int>(c.vertices.size()));
      th.push_back(a);
      c.vertices.push_back(pt({radii[k] * std::cos(a), radii[k] * std::sin(a), 0.0}));
    }
    rings.push_back(ids);
    angles.push_back(th);
  }
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto& a = rings[k];
    const auto& b = rings[k + 1];
    if (a.size() == 1) {
      for (std::size_t i = 0; i < b.size(); ++i) c.cells.push_back({a[0], b[i], b[(i + 1) % b.size()]});
      continue;
    }
    const auto n = a.size();
    const auto m = b.size();
    std::size_t i = 0;
    std::size_t j = 0;
    auto ang = [](const std::vector<double>& th, std::size_t idx) {
      return th[idx % th.size()] + 2.0 * std::numbers::pi * static_cast<double>(idx / th.size());
    };
    while (i < n || j < m) {
      const bool advance_a = j == m || (i < n && ang(angles[k], i + 1) < ang(angles[k + 1], j + 1));
      if (advance_a) {
        c.cells.push_back({a[i % n], b[j % m], a[(i + 1) % n]});
        ++i;
      } else {
        c.cells.push_back({a[i % n], b[j % m], b[(j + 1) % m]});
        ++j;
      }
    }
  }
  return c;
}

// Lattice patch whose interior vertex 12 sits just off the segment joining
// two neighbors.
inline SimplicialComplex sliver_patch() {
  auto c = lattice_patch(5, 5);
  c.vertices[12] = (c.vertices[7] + c.vertices[13]) / 2.0 + pt({0.0, 0.02, 0.0});
  return c;
}

inline std::vector<Point> uniform_disk(std::size_t n, std::uint64_t seed, double radius = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point> out;
  while (out.size() < n) {
    const double x = u(rng);
    const double y = u(rng);
    if (x * x + y * y <= radius * radius) out.push_back(pt({x, y, 0.0}));
  }
  return out;
}

}  // namespace fatmesh::testing
