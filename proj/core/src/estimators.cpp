#include "fatmesh/error.hpp"
#include "fatmesh/manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fatmesh {

OsculatoryEstimate estimate_osculatory_radius(const EmbeddedManifold& m, std::span<const Point> samples,
                                              double cap) {
  if (samples.size() < 2) throw InvalidInputError("osculatory estimate needs at least two samples");
  OsculatoryEstimate est;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Eigen::MatrixXd t = tangent_frame(m, samples[i]);
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      const Point d = samples[j] - samples[i];
      const double normal = (d - t * (t.transpose() * d)).norm();
      if (normal < 1e-12) continue;
      ++est.pairs_used;
      best = std::min(best, d.squaredNorm() / (2.0 * normal));
    }
  }
  if (est.pairs_used == 0) {
    est.omega = cap;
    est.flat = true;
  } else {
    est.omega = best;
  }
  return est;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  std::vector<int> rank;
  explicit DisjointSets(std::size_t n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    auto ua = static_cast<std::size_t>(a);
    auto ub = static_cast<std::size_t>(b);
    if (rank[ua] < rank[ub]) std::swap(ua, ub);
    parent[ub] = static_cast<int>(ua);
    if (rank[ua] == rank[ub]) ++rank[ua];
    return true;
  }
};

double distance_to_region(const Region& r, const Point& x) {
  const double d = (x - r.center).norm();
  if (r.is_point()) return d;
  return std::max({0.0, r.r_inner - d, d - r.r_outer});
}

}  // namespace

double estimate_connectivity_radius(std::span<const Point> samples, double omega, const ConnectivityOptions& opts) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidInputError("connectivity estimate needs at least two samples");
  if (opts.grid < 1) throw InvalidInputError("connectivity grid must be positive");

  Eigen::MatrixXd dist(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (samples[i] - samples[j]).norm();
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    }
  }
  auto at = [&](std::size_t i, std::size_t j) {
    return dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  double spacing = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) nearest = std::min(nearest, at(i, j));
    }
    spacing = std::max(spacing, nearest);
  }
  const double edge = opts.edge_factor * spacing;
  std::vector<std::vector<int>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && at(i, j) <= edge) adjacency[i].push_back(static_cast<int>(j));
    }
  }

  const double cap = opts.cap > 0.0 ? opts.cap : dist.maxCoeff();
  const double step = cap / opts.grid;
  double first_failure = std::numeric_limits<double>::infinity();

  std::vector<int> order(n);
  std::vector<int> position(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (opts.centers && distance_to_region(*opts.centers, samples[c]) > omega) continue;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = at(c, static_cast<std::size_t>(a));
      const double db = at(c, static_cast<std::size_t>(b));
      return da != db ? da < db : a < b;
    });
    for (std::size_t k = 0; k < n; ++k) position[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

    DisjointSets sets(n);
    int components = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = static_cast<std::size_t>(order[k]);
      const double r = at(c, v);
      if (r > cap || r >= first_failure) break;
      ++components;
      for (int w : adjacency[v]) {
        if (position[static_cast<std::size_t>(w)] < static_cast<int>(k) && sets.unite(static_cast<int>(v), w)) {
          --components;
        }
      }
      // Samples tied at the same distance enter the ball together.
      const bool group_done = k + 1 == n || at(c, static_cast<std::size_t>(order[k + 1])) > r;
      if (group_done && components > 1) {
        first_failure = r;
        break;
      }
    }
  }

  if (!std::isfinite(first_failure)) return cap;
  const double steps = std::ceil(first_failure / step) - 1.0;
  if (steps < 1.0) {
    throw ConnectivityError("samples are disconnected already at the finest tested radius");
  }
  return steps * step;
}

InequalityCheck check_reach_inequality(const RadiusEstimates& est, double slack) {
  const double bound = std::sqrt(3.0) / 3.0 * est.kappa;
  return {est.omega <= bound * (1.0 + slack), bound - est.omega};
}

}  // namespace fatmesh
