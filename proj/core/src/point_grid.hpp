#pragma once

#include "fatmesh/geometry.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace fatmesh::detail {

// Uniform hash grid over points of R^nu, nu <= 4.
class PointGrid {
 public:
  explicit PointGrid(double cell) : cell_(cell) {}

  void insert(const Point& p, int id) { cells_[key(p)].push_back(id); }

  // Calls f(id) for every stored id whose cell lies within `reach` cells of p.
  template <class F>
  void visit(const Point& p, int reach, F&& f) const {
    const Key k = key(p);
    Key probe = k;
    const int dims = static_cast<int>(p.size());
    visit_rec(probe, k, 0, dims, reach, f);
  }

  // Ids within distance r of p, unsorted.
  std::vector<int> within(const std::vector<Point>& pts, const Point& p, double r) const {
    std::vector<int> out;
    const int reach = static_cast<int>(std::ceil(r / cell_));
    visit(p, reach, [&](int id) {
      if ((pts[static_cast<std::size_t>(id)] - p).norm() <= r) out.push_back(id);
    });
    return out;
  }

  double cell() const { return cell_; }

 private:
  using Key = std::array<std::int64_t, 4>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  Key key(const Point& p) const {
    Key k{0, 0, 0, 0};
    for (Eigen::Index i = 0; i < p.size() && i < 4; ++i) {
      k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
    }
    return k;
  }

  template <class F>
  void visit_rec(Key& probe, const Key& base, int axis, int dims, int reach, F& f) const {
    if (axis == dims) {
      auto it = cells_.find(probe);
      if (it != cells_.end()) {
        for (int id : it->second) f(id);
      }
      return;
    }
    const auto a = static_cast<std::size_t>(axis);
    for (int d = -reach; d <= reach; ++d) {
      probe[a] = base[a] + d;
      visit_rec(probe, base, axis + 1, dims, reach, f);
    }
    probe[a] = base[a];
  }

  double cell_;
  std::unordered_map<Key, std::vector<int>, KeyHash> cells_;
};

}  // namespace fatmesh::detail
