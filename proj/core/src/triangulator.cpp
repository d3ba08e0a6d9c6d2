#include "fatmesh/triangulator.hpp"

#include "fatmesh/error.hpp"
#include "point_grid.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <set>

namespace fatmesh {

namespace {

double bbox_diagonal(std::span<const Point> pts) {
  if (pts.empty()) return 0.0;
  Point lo = pts.front();
  Point hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

// Index of the nearest stored point (lowest index on ties).
int nearest_in_grid(const detail::PointGrid& grid, const std::vector<Point>& pts, const Point& x) {
  int reach = 1;
  double found = std::numeric_limits<double>::infinity();
  while (!std::isfinite(found)) {
    grid.visit(x, reach, [&](int id) { found = std::min(found, (pts[static_cast<std::size_t>(id)] - x).norm()); });
    reach *= 2;
    if (reach > (1 << 20)) throw InvalidInputError("nearest-point query found no candidates");
  }
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int id : grid.within(pts, x, found * (1.0 + 1e-12))) {
    const double d = (pts[static_cast<std::size_t>(id)] - x).norm();
    if (d < best_d || (d == best_d && id < best)) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

// Deterministic value in [0, 1) from a site index.
double site_hash(std::size_t i) {
  std::uint64_t z = static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double circumradius(const Point& a, const Point& b, const Point& c) {
  const Point u = b - a;
  const Point v = c - a;
  const double uu = u.squaredNorm();
  const double vv = v.squaredNorm();
  const double uv = u.dot(v);
  const double det = uu * vv - uv * uv;
  if (det <= 0.0) return std::numeric_limits<double>::infinity();
  const double alpha = vv * (uu - uv) / (2.0 * det);
  const double beta = uu * (vv - uv) / (2.0 * det);
  return (alpha * u + beta * v).norm();
}

}  // namespace

DirichletComplex dirichlet_complex(std::span<const Point> sites, const Region& region, const EmbeddedManifold& m,
                                   const DirichletOptions& opts) {
  if (sites.empty()) throw EmptyInputError("Dirichlet complex needs at least one site");
  DirichletComplex dc;
  dc.sites.assign(sites.begin(), sites.end());
  dc.region = region;

  if (region.is_point()) {
    dc.witnesses = {region.center};
  } else {
    Rng rng(opts.seed);
    const auto count = static_cast<std::size_t>(std::max(1.0, opts.density * 1.5 * static_cast<double>(sites.size())));
    dc.witnesses = sample_region_n(m, region, rng, count);
    if (dc.witnesses.empty()) throw EmptyRegionError("no witness landed in the region");
  }

  const int dim = std::max(1, m.intrinsic_dim());
  const double diag = std::max(bbox_diagonal(dc.sites), bbox_diagonal(dc.witnesses));
  const double site_cell =
      std::max(1e-12, diag / std::pow(static_cast<double>(dc.sites.size()), 1.0 / dim));
  detail::PointGrid site_grid(site_cell);
  for (std::size_t i = 0; i < dc.sites.size(); ++i) site_grid.insert(dc.sites[i], static_cast<int>(i));

  dc.owner.resize(dc.witnesses.size());
  dc.cell_sizes.assign(dc.sites.size(), 0);
  for (std::size_t w = 0; w < dc.witnesses.size(); ++w) {
    const int o = nearest_in_grid(site_grid, dc.sites, dc.witnesses[w]);
    dc.owner[w] = o;
    ++dc.cell_sizes[static_cast<std::size_t>(o)];
    dc.covering_radius = std::max(dc.covering_radius, (dc.witnesses[w] - dc.sites[static_cast<std::size_t>(o)]).norm());
  }
  for (std::size_t i = 0; i < dc.sites.size(); ++i) {
    if (dc.cell_sizes[i] == 0) {
      throw DensityError("Dirichlet cell of site " + std::to_string(i) + " received no witness; raise the density",
                         i);
    }
  }
  if (dc.witnesses.size() < 2) return dc;

  const double wcell = std::max(1e-12, diag / std::pow(static_cast<double>(dc.witnesses.size()), 1.0 / dim));
  detail::PointGrid wgrid(wcell);
  for (std::size_t i = 0; i < dc.witnesses.size(); ++i) wgrid.insert(dc.witnesses[i], static_cast<int>(i));
  double total = 0.0;
  for (std::size_t i = 0; i < dc.witnesses.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int reach = 1;
    while (!std::isfinite(best)) {
      wgrid.visit(dc.witnesses[i], reach, [&](int id) {
        if (static_cast<std::size_t>(id) != i) best = std::min(best, (dc.witnesses[static_cast<std::size_t>(id)] - dc.witnesses[i]).norm());
      });
      reach *= 2;
    }
    // The ring search can miss a closer point just outside the probed cells.
    for (int id : wgrid.within(dc.witnesses, dc.witnesses[i], best)) {
      if (static_cast<std::size_t>(id) != i) best = std::min(best, (dc.witnesses[static_cast<std::size_t>(id)] - dc.witnesses[i]).norm());
    }
    total += best;
  }
  dc.spacing = total / static_cast<double>(dc.witnesses.size());

  const double link = opts.adjacency_factor * dc.spacing;
  std::set<Edge> adjacent;
  for (std::size_t i = 0; i < dc.witnesses.size(); ++i) {
    for (int id : wgrid.within(dc.witnesses, dc.witnesses[i], link)) {
      const int a = dc.owner[i];
      const int b = dc.owner[static_cast<std::size_t>(id)];
      if (a != b) adjacent.insert({std::min(a, b), std::max(a, b)});
    }
  }
  dc.adjacency.assign(adjacent.begin(), adjacent.end());
  return dc;
}

DualComplex dual_complex(const DirichletComplex& dc, const EmbeddedManifold& m, const DualOptions& opts) {
  const int n = m.intrinsic_dim();
  if (n != 1 && n != 2) throw InvalidInputError("dual complexes are built for curves and surfaces only");
  const auto& sites = dc.sites;
  DualComplex out;
  out.complex.vertices = sites;
  out.complex.dim = n;
  if (sites.size() < static_cast<std::size_t>(n + 1)) {
    out.free_edges = dc.adjacency;
    return out;
  }

  const double span = 2.0 * (1.1 * dc.covering_radius + dc.spacing);
  std::vector<double> weights(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) weights[i] = 1e-12 * span * span * site_hash(i);
  const double max_weight = 1e-12 * span * span;
  const double tol = 1e-15 * span * span;

  detail::PointGrid grid(std::max(span * 0.5, 1e-12));
  for (std::size_t i = 0; i < sites.size(); ++i) grid.insert(sites[i], static_cast<int>(i));

  auto try_cell = [&](const std::vector<std::size_t>& idx) {
    std::vector<Point> s;
    std::vector<double> w;
    for (auto i : idx) {
      s.push_back(sites[i]);
      w.push_back(weights[i]);
    }
    auto x = equal_power_point(m, s, w);
    if (!x) return;
    const double power = (*x - s[0]).squaredNorm() - w[0];
    if (!(power >= 0.0) || std::sqrt(power) > 0.5 * span) return;
    if (!dc.region.contains(*x)) return;
    for (int l : grid.within(sites, *x, std::sqrt(power + max_weight) + 1e-9 * span)) {
      const auto ul = static_cast<std::size_t>(l);
      if (std::find(idx.begin(), idx.end(), ul) != idx.end()) continue;
      if ((*x - sites[ul]).squaredNorm() - weights[ul] < power - tol) return;
    }
    Cell cell(idx.begin(), idx.end());
    if (n == 2 && m.codim() == 1 && m.ambient_dim() == 3) {
      const Eigen::Vector3d a = sites[idx[0]];
      const Eigen::Vector3d b = sites[idx[1]];
      const Eigen::Vector3d c = sites[idx[2]];
      const Eigen::Vector3d normal = m.jacobian(*x).row(0).transpose();
      if ((b - a).cross(c - a).dot(normal) < 0.0) std::swap(cell[1], cell[2]);
    }
    out.complex.cells.push_back(std::move(cell));
    out.circumradii.push_back(std::sqrt(power));
  };

  for (std::size_t i = 0; i < sites.size(); ++i) {
    auto nb = grid.within(sites, sites[i], span);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::remove_if(nb.begin(), nb.end(), [&](int j) { return static_cast<std::size_t>(j) <= i; }),
             nb.end());
    if (n == 1) {
      for (int j : nb) try_cell({i, static_cast<std::size_t>(j)});
      continue;
    }
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const auto j = static_cast<std::size_t>(nb[a]);
        const auto k = static_cast<std::size_t>(nb[b]);
        if ((sites[j] - sites[k]).norm() > span) continue;
        if (circumradius(sites[i], sites[j], sites[k]) > 0.5 * span) continue;
        try_cell({i, j, k});
      }
    }
  }

  if (n == 1) {
    for (const auto& e : dc.adjacency) {
      bool used = false;
      for (const auto& c : out.complex.cells) used = used || (std::min(c[0], c[1]) == e[0] && std::max(c[0], c[1]) == e[1]);
      if (!used) out.free_edges.push_back(e);
    }
    out.validity = validate_complex(out.complex);
    return out;
  }

  std::map<Edge, int> edge_use;
  for (const auto& c : out.complex.cells) {
    for (int k = 0; k < 3; ++k) {
      const int a = c[static_cast<std::size_t>(k)];
      const int b = c[static_cast<std::size_t>((k + 1) % 3)];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [e, count] : edge_use) {
    if (count > 2) {
      throw DegeneracyError("edge (" + std::to_string(e[0]) + ", " + std::to_string(e[1]) +
                            ") is shared by more than two cells");
    }
  }
  for (const auto& e : dc.adjacency) {
    if (!edge_use.count(e)) out.free_edges.push_back(e);
  }

  if (opts.fill_holes && !out.complex.cells.empty() && is_consistently_oriented(out.complex)) {
    std::vector<double> radii;
    if (dc.region.has_inner_boundary()) radii.push_back(dc.region.r_inner);
    if (dc.region.has_outer_boundary()) radii.push_back(dc.region.r_outer);
    auto on_region_boundary = [&](const Point& p) {
      const double d = (p - dc.region.center).norm();
      for (double r : radii) {
        if (std::abs(d - r) <= 1e-9 * (1.0 + r)) return true;
      }
      return false;
    };
    std::map<Edge, int> third;
    for (const auto& cell : out.complex.cells) {
      for (std::size_t k = 0; k < 3; ++k) third[{cell[k], cell[(k + 1) % 3]}] = cell[(k + 2) % 3];
    }
    for (const auto& loop : boundary_loops(out.complex)) {
      if (loop.size() < 3 || loop.size() > opts.max_hole) continue;
      if (std::all_of(loop.begin(), loop.end(),
                      [&](int v) { return on_region_boundary(sites[static_cast<std::size_t>(v)]); })) {
        continue;
      }
      Point bary = Point::Zero(sites[0].size());
      for (int v : loop) bary += sites[static_cast<std::size_t>(v)];
      bary /= static_cast<double>(loop.size());
      // A hole lies across each loop edge from the cell that owns it; an
      // outer boundary does not.
      bool enclosed = true;
      for (std::size_t k = 0; k < loop.size() && enclosed; ++k) {
        const int a = loop[k];
        const int b = loop[(k + 1) % loop.size()];
        const auto it = third.find({a, b});
        if (it == third.end()) continue;
        const Point& pa = sites[static_cast<std::size_t>(a)];
        const Point e = sites[static_cast<std::size_t>(b)] - pa;
        const Point inward = sites[static_cast<std::size_t>(it->second)] - pa;
        const Point across = bary - pa;
        const double ee = e.squaredNorm();
        if (!(ee > 0.0)) continue;
        const Point hin = inward - (inward.dot(e) / ee) * e;
        const Point hout = across - (across.dot(e) / ee) * e;
        if (hin.dot(hout) >= 0.0) enclosed = false;
      }
      if (!enclosed) continue;
      const int s = static_cast<int>(out.complex.vertices.size());
      out.complex.vertices.push_back(bary);
      out.steiner.push_back(static_cast<std::size_t>(s));
      for (std::size_t k = 0; k < loop.size(); ++k) {
        const int a = loop[k];
        const int b = loop[(k + 1) % loop.size()];
        out.complex.cells.push_back({b, a, s});
        out.circumradii.push_back(circumradius(out.complex.vertices[static_cast<std::size_t>(b)],
                                               out.complex.vertices[static_cast<std::size_t>(a)], bary));
      }
    }
  }
  out.validity = validate_complex(out.complex);
  return out;
}

DualComplex project_dual(const DualComplex& gamma, const EmbeddedManifold& m) {
  DualComplex out = gamma;
  for (auto& v : out.complex.vertices) v = project_to_manifold(m, v);
  out.validity = validate_complex(out.complex);
  return out;
}

FatnessVerdict verify_fatness(const SimplicialComplex& c, double phi0) {
  FatnessVerdict v;
  v.report = complex_thickness(c);
  v.pass = v.report.min_thickness >= phi0;
  return v;
}

FatnessVerdict verify_fatness(const DualComplex& gamma, double phi0) { return verify_fatness(gamma.complex, phi0); }

}  // namespace fatmesh
