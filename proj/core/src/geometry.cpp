#include "fatmesh/geometry.hpp"

#include "fatmesh/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace fatmesh {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

double max_pairwise_distance(std::span<const Point* const> pts) {
  double best = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      best = std::max(best, (*pts[a] - *pts[b]).norm());
    }
  }
  return best;
}

// Vol_j / diam^j through the Cayley-Menger determinant with distances
// normalized by diam^2, so the result does not depend on the scale.
double normalized_volume(std::span<const Point* const> pts, double diam) {
  const int j = static_cast<int>(pts.size()) - 1;
  if (j == 0) return 1.0;
  if (!(diam > 0.0)) return 0.0;
  const long double inv_d2 = 1.0L / (static_cast<long double>(diam) * diam);

  LongMatrix cm = LongMatrix::Zero(j + 2, j + 2);
  for (int i = 1; i < j + 2; ++i) {
    cm(0, i) = 1.0L;
    cm(i, 0) = 1.0L;
  }
  for (int a = 0; a <= j; ++a) {
    for (int b = a + 1; b <= j; ++b) {
      long double d2 = 0.0L;
      for (Eigen::Index r = 0; r < pts[a]->size(); ++r) {
        const long double diff = static_cast<long double>((*pts[a])[r]) - (*pts[b])[r];
        d2 += diff * diff;
      }
      cm(a + 1, b + 1) = d2 * inv_d2;
      cm(b + 1, a + 1) = d2 * inv_d2;
    }
  }
  const long double det = cm.partialPivLu().determinant();
  long double factorial = 1.0L;
  for (int i = 2; i <= j; ++i) factorial *= i;
  const long double sign = (j % 2 == 0) ? -1.0L : 1.0L;  // (-1)^(j+1)
  long double vol2 = sign * det / (std::ldexp(1.0L, j) * factorial * factorial);
  if (vol2 < 0.0L) vol2 = 0.0L;  // round-off on flat inputs; clamp
  const double ratio = static_cast<double>(std::sqrt(vol2));
  return ratio < kDegeneracyTol ? 0.0 : ratio;
}

std::vector<const Point*> gather(const Simplex& s, std::uint32_t mask) {
  std::vector<const Point*> pts;
  for (int i = 0; i <= s.dim(); ++i) {
    if (mask & (1u << i)) pts.push_back(&s.vertex(i));
  }
  return pts;
}

}  // namespace

Simplex::Simplex(std::vector<Point> vertices, bool allow_degenerate)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidInputError("simplex needs at least one vertex");
  const auto nu = vertices_.front().size();
  if (nu == 0) throw InvalidInputError("simplex vertices must have positive dimension");
  for (const auto& v : vertices_) {
    if (v.size() != nu) throw InvalidInputError("simplex vertices have mixed ambient dimensions");
  }
  if (static_cast<Eigen::Index>(vertices_.size()) > nu + 1) {
    throw InvalidInputError("a " + std::to_string(vertices_.size() - 1) + "-simplex does not fit in R^" +
                            std::to_string(nu));
  }
  if (!allow_degenerate && vertices_.size() > 1) {
    std::vector<const Point*> pts;
    for (const auto& v : vertices_) pts.push_back(&v);
    const double scale = std::max(max_pairwise_distance(pts), 1.0);
    for (std::size_t a = 0; a < vertices_.size(); ++a) {
      for (std::size_t b = a + 1; b < vertices_.size(); ++b) {
        if ((vertices_[a] - vertices_[b]).norm() <= kDegeneracyTol * scale) {
          throw InvalidInputError("simplex has coincident vertices " + std::to_string(a) + " and " +
                                  std::to_string(b));
        }
      }
    }
  }
}

Simplex Simplex::face(std::uint32_t mask) const {
  std::vector<Point> pts;
  for (int i = 0; i <= dim(); ++i) {
    if (mask & (1u << i)) pts.push_back(vertices_[static_cast<std::size_t>(i)]);
  }
  if (pts.empty()) throw InvalidInputError("empty face mask");
  return Simplex(std::move(pts), true);
}

std::vector<std::uint32_t> Simplex::face_masks() const {
  const std::uint32_t full = (1u << (dim() + 1)) - 1u;
  std::vector<std::uint32_t> masks;
  masks.reserve(full);
  for (std::uint32_t m = 1; m <= full; ++m) masks.push_back(m);
  return masks;
}

double simplex_diameter(const Simplex& s) {
  std::vector<const Point*> pts;
  for (const auto& v : s.vertices()) pts.push_back(&v);
  return max_pairwise_distance(pts);
}

double volume_ratio(const Simplex& s) {
  std::vector<const Point*> pts;
  for (const auto& v : s.vertices()) pts.push_back(&v);
  return normalized_volume(pts, max_pairwise_distance(pts));
}

double simplex_volume(const Simplex& s) {
  if (s.dim() == 0) return 1.0;
  const double diam = simplex_diameter(s);
  return volume_ratio(s) * std::pow(diam, s.dim());
}

std::vector<double> thickness_by_dimension(const Simplex& s) {
  std::vector<double> per_dim(static_cast<std::size_t>(s.dim() + 1), 1.0);
  for (std::uint32_t mask : s.face_masks()) {
    const int j = std::popcount(mask) - 1;
    if (j == 0) continue;
    const auto pts = gather(s, mask);
    const double ratio = normalized_volume(pts, max_pairwise_distance(pts));
    per_dim[static_cast<std::size_t>(j)] = std::min(per_dim[static_cast<std::size_t>(j)], ratio);
  }
  return per_dim;
}

double thickness(const Simplex& s) {
  const auto per_dim = thickness_by_dimension(s);
  return *std::min_element(per_dim.begin(), per_dim.end());
}

Simplex SimplicialComplex::cell_simplex(std::size_t i) const {
  std::vector<Point> pts;
  for (int idx : cells.at(i)) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= vertices.size()) {
      throw InvalidInputError("cell " + std::to_string(i) + " references missing vertex " + std::to_string(idx));
    }
    pts.push_back(vertices[static_cast<std::size_t>(idx)]);
  }
  return Simplex(std::move(pts), true);
}

ThicknessReport complex_thickness(const SimplicialComplex& c, int buckets) {
  if (c.cells.empty()) throw EmptyInputError("complex has no cells");
  if (buckets < 1) throw InvalidInputError("histogram needs at least one bucket");

  ThicknessReport report;
  report.cell_count = c.cells.size();
  report.cell_thickness.resize(c.cells.size());
  report.min_thickness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const auto per_dim = thickness_by_dimension(c.cell_simplex(i));
    double phi = 1.0;
    for (std::size_t k = 0; k < per_dim.size(); ++k) {
      phi = std::min(phi, per_dim[k]);
      auto [it, inserted] = report.per_dimension_min.emplace(static_cast<int>(k), per_dim[k]);
      if (!inserted) it->second = std::min(it->second, per_dim[k]);
    }
    report.cell_thickness[i] = phi;
    if (phi < report.min_thickness) {
      report.min_thickness = phi;
      report.argmin_cell = i;
    }
  }

  report.histogram.resize(static_cast<std::size_t>(buckets));
  const double width = 1.0 / buckets;
  for (int b = 0; b < buckets; ++b) {
    report.histogram[static_cast<std::size_t>(b)].lo = b * width;
    report.histogram[static_cast<std::size_t>(b)].hi = (b + 1) * width;
  }
  for (double phi : report.cell_thickness) {
    auto b = static_cast<int>(std::floor(phi / width));
    b = std::clamp(b, 0, buckets - 1);
    ++report.histogram[static_cast<std::size_t>(b)].count;
  }
  return report;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kBadIndex: return "bad index";
    case ViolationKind::kRepeatedVertexInCell: return "repeated vertex in cell";
    case ViolationKind::kDuplicateCell: return "duplicate cell";
    case ViolationKind::kDegenerateCell: return "degenerate cell";
    case ViolationKind::kDuplicateVertex: return "duplicate vertex";
    case ViolationKind::kImproperIntersection: return "improper intersection";
  }
  return "unknown";
}

namespace {

// True when some point of segment [e0, e1] lies within dist_tol of the
// relative interior of the face, with every barycentric coordinate >= margin.
// An anchored segment starts at a vertex of the face; its distance to the face
// grows linearly from zero, so only its far end is compared with dist_tol.
bool segment_meets_face_interior(const Point& e0, const Point& e1, std::span<const Point* const> face,
                                 double dist_tol, double margin, bool anchored = false) {
  const Point d = e1 - e0;
  const auto k = static_cast<Eigen::Index>(face.size()) - 1;
  if (k == 0) {
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (e0 - *face[0]).norm() <= dist_tol;
    double t = (*face[0] - e0).dot(d) / len2;
    if (t < margin || t > 1.0 - margin) return false;
    return (e0 + t * d - *face[0]).norm() <= dist_tol;
  }
  Eigen::MatrixXd basis(e0.size(), k);
  for (Eigen::Index i = 0; i < k; ++i) basis.col(i) = *face[static_cast<std::size_t>(i + 1)] - *face[0];
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Point base = e0 - *face[0];
  const Eigen::VectorXd c0 = ldlt.solve(basis.transpose() * base);
  const Eigen::VectorXd c1 = ldlt.solve(basis.transpose() * d);
  const Point r0 = base - basis * c0;
  const Point r1 = d - basis * c1;

  // Barycentric coordinates are affine in t: lambda_i(t) = a_i + t b_i.
  double lo = 0.0;
  double hi = 1.0;
  auto clip = [&](double a, double b) {
    // a + t b >= margin
    if (std::abs(b) < 1e-300) {
      if (a < margin) hi = -1.0;
      return;
    }
    const double t = (margin - a) / b;
    if (b > 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  };
  clip(1.0 - c0.sum(), -c1.sum());
  for (Eigen::Index i = 0; i < k; ++i) clip(c0[i], c1[i]);
  if (lo > hi) return false;
  if (anchored) return r1.norm() <= dist_tol;

  const double rr = r1.squaredNorm();
  double t = lo;
  if (rr > 0.0) t = std::clamp(-r0.dot(r1) / rr, lo, hi);
  return (r0 + t * r1).norm() <= dist_tol;
}

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

}  // namespace

ValidityReport validate_complex(const SimplicialComplex& c, const ValidationOptions& opts) {
  ValidityReport report;
  auto add = [&](ViolationKind kind, std::size_t a, std::size_t b, std::string msg) {
    report.valid = false;
    if (report.violations.size() < opts.max_violations) {
      report.violations.push_back({kind, a, b, std::move(msg)});
    }
  };

  const auto nv = c.vertices.size();
  double scale = 0.0;
  if (nv > 0) {
    Eigen::VectorXd lo = c.vertices.front();
    Eigen::VectorXd hi = c.vertices.front();
    for (const auto& v : c.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    scale = (hi - lo).norm();
  }
  const double dist_tol = opts.tol * std::max(scale, 1e-300);

  // Per-cell checks.
  std::vector<char> usable(c.cells.size(), 1);
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const auto& cell = c.cells[i];
    if (static_cast<int>(cell.size()) != c.dim + 1) {
      add(ViolationKind::kBadIndex, i, i, "cell has " + std::to_string(cell.size()) + " vertices");
      usable[i] = 0;
      continue;
    }
    bool ok = true;
    for (int idx : cell) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= nv) ok = false;
    }
    if (!ok) {
      add(ViolationKind::kBadIndex, i, i, "cell references a missing vertex");
      usable[i] = 0;
      continue;
    }
    std::vector<int> sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      add(ViolationKind::kRepeatedVertexInCell, i, i, "cell repeats a vertex");
      usable[i] = 0;
      continue;
    }
    if (volume_ratio(c.cell_simplex(i)) == 0.0) {
      add(ViolationKind::kDegenerateCell, i, i, "cell has zero volume");
      usable[i] = 0;
    }
  }

  // Duplicate cells.
  {
    std::map<std::vector<int>, std::size_t> seen;
    for (std::size_t i = 0; i < c.cells.size(); ++i) {
      if (static_cast<int>(c.cells[i].size()) != c.dim + 1) continue;
      std::vector<int> key = c.cells[i];
      std::sort(key.begin(), key.end());
      auto [it, inserted] = seen.emplace(key, i);
      if (!inserted) {
        add(ViolationKind::kDuplicateCell, it->second, i, "cells repeat the same vertex set");
        usable[i] = 0;
      }
    }
  }

  // Coincident vertices: sweep along the first coordinate.
  if (nv > 1) {
    std::vector<std::size_t> order(nv);
    for (std::size_t i = 0; i < nv; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return c.vertices[a][0] < c.vertices[b][0]; });
    for (std::size_t p = 0; p < nv; ++p) {
      for (std::size_t q = p + 1; q < nv; ++q) {
        const auto a = order[p];
        const auto b = order[q];
        if (c.vertices[b][0] - c.vertices[a][0] > dist_tol) break;
        if ((c.vertices[a] - c.vertices[b]).norm() <= dist_tol) {
          add(ViolationKind::kDuplicateVertex, std::min(a, b), std::max(a, b), "vertices coincide");
        }
      }
    }
  }

  // Pairwise intersections with an axis sweep over cell bounding boxes.
  std::vector<Box> boxes(c.cells.size());
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    if (!usable[i]) continue;
    const auto& cell = c.cells[i];
    Box box{c.vertices[static_cast<std::size_t>(cell[0])], c.vertices[static_cast<std::size_t>(cell[0])]};
    for (int idx : cell) {
      box.lo = box.lo.cwiseMin(c.vertices[static_cast<std::size_t>(idx)]);
      box.hi = box.hi.cwiseMax(c.vertices[static_cast<std::size_t>(idx)]);
    }
    box.lo.array() -= dist_tol;
    box.hi.array() += dist_tol;
    boxes[i] = std::move(box);
    live.push_back(i);
  }
  std::sort(live.begin(), live.end(), [&](std::size_t a, std::size_t b) { return boxes[a].lo[0] < boxes[b].lo[0]; });

  auto improper = [&](const Cell& a, const Cell& b) {
    double local = 0.0;
    for (const Cell* cell : {&a, &b}) {
      for (int x : *cell) {
        for (int y : *cell) {
          local = std::max(local, (c.vertices[static_cast<std::size_t>(x)] - c.vertices[static_cast<std::size_t>(y)]).norm());
        }
      }
    }
    const double local_tol = opts.tol * std::max(local, 1e-300);
    std::set<int> shared;
    for (int x : a) {
      if (std::find(b.begin(), b.end(), x) != b.end()) shared.insert(x);
    }
    auto edges_vs_faces = [&](const Cell& from, const Cell& to) {
      const auto kt = static_cast<int>(to.size());
      for (std::size_t p = 0; p < from.size(); ++p) {
        for (std::size_t q = p + 1; q < from.size(); ++q) {
          for (std::uint32_t mask = 1; mask < (1u << kt); ++mask) {
            std::vector<const Point*> face;
            bool inside_shared = true;
            bool has_p = false;
            bool has_q = false;
            for (int v = 0; v < kt; ++v) {
              if (!(mask & (1u << v))) continue;
              const int id = to[static_cast<std::size_t>(v)];
              face.push_back(&c.vertices[static_cast<std::size_t>(id)]);
              if (!shared.count(id)) inside_shared = false;
              has_p = has_p || id == from[p];
              has_q = has_q || id == from[q];
            }
            if (inside_shared) continue;
            if (face.size() == 1 && (has_p || has_q)) continue;
            // Orient the segment so that a shared endpoint comes first.
            const int first = has_q && !has_p ? from[q] : from[p];
            const int second = first == from[p] ? from[q] : from[p];
            const Point& e0 = c.vertices[static_cast<std::size_t>(first)];
            const Point& e1 = c.vertices[static_cast<std::size_t>(second)];
            if (segment_meets_face_interior(e0, e1, face, local_tol, opts.margin, has_p || has_q)) return true;
          }
        }
      }
      return false;
    };
    return edges_vs_faces(a, b) || edges_vs_faces(b, a);
  };

  for (std::size_t p = 0; p < live.size(); ++p) {
    const auto i = live[p];
    for (std::size_t q = p + 1; q < live.size(); ++q) {
      const auto j = live[q];
      if (boxes[j].lo[0] > boxes[i].hi[0]) break;
      bool overlap = true;
      for (Eigen::Index d = 1; d < boxes[i].lo.size(); ++d) {
        if (boxes[j].lo[d] > boxes[i].hi[d] || boxes[i].lo[d] > boxes[j].hi[d]) {
          overlap = false;
          break;
        }
      }
      if (!overlap) continue;
      ++report.pairs_tested;
      if (improper(c.cells[i], c.cells[j])) {
        add(ViolationKind::kImproperIntersection, std::min(i, j), std::max(i, j),
            "cells intersect outside their common face");
      }
    }
  }
  return report;
}

}  // namespace fatmesh
