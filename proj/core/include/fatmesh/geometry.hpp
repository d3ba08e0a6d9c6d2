#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fatmesh {

using Point = Eigen::VectorXd;

// Faces below this relative size, Vol_j < kDegeneracyTol * diam^j, count as
// degenerate and give thickness 0.
inline constexpr double kDegeneracyTol = 1e-12;

// An ordered list of k+1 points in R^nu, 1 <= k+1 <= nu+1.
class Simplex {
 public:
  // Throws InvalidInputError on an empty list, mixed ambient dimensions, more
  // than nu+1 vertices, or (unless allow_degenerate) coincident vertices.
  explicit Simplex(std::vector<Point> vertices, bool allow_degenerate = false);

  int dim() const { return static_cast<int>(vertices_.size()) - 1; }
  int ambient_dim() const { return static_cast<int>(vertices_.front().size()); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }

  // Bit i of mask selects vertex i. Vertex order is preserved.
  Simplex face(std::uint32_t mask) const;

  // All 2^(k+1) - 1 nonempty faces as vertex masks, in increasing mask order.
  std::vector<std::uint32_t> face_masks() const;

 private:
  std::vector<Point> vertices_;
};

// j-dimensional volume of the convex hull; 1 for a single vertex.
double simplex_volume(const Simplex& s);

// Maximum pairwise vertex distance; 0 for a single vertex.
double simplex_diameter(const Simplex& s);

// Vol_j / diam^j for the simplex itself (not its faces). 1 for a vertex,
// 0 when degenerate.
double volume_ratio(const Simplex& s);

// min over all faces of Vol_j / diam^j. In [0, 1].
double thickness(const Simplex& s);

// Entry k holds the minimum ratio over the k-dimensional faces.
std::vector<double> thickness_by_dimension(const Simplex& s);

using Cell = std::vector<int>;

struct SimplicialComplex {
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  int dim = 2;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_cells() const { return cells.size(); }
  int ambient_dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices.front().size()); }
  Simplex cell_simplex(std::size_t i) const;
};

struct HistogramBucket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct ThicknessReport {
  double min_thickness = 0.0;
  std::size_t argmin_cell = 0;
  std::size_t cell_count = 0;
  std::vector<HistogramBucket> histogram;
  std::map<int, double> per_dimension_min;
  std::vector<double> cell_thickness;
};

// Throws EmptyInputError for a complex without cells.
ThicknessReport complex_thickness(const SimplicialComplex& c, int buckets = 20);

enum class ViolationKind {
  kBadIndex,
  kRepeatedVertexInCell,
  kDuplicateCell,
  kDegenerateCell,
  kDuplicateVertex,
  kImproperIntersection,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t first = 0;
  std::size_t second = 0;
  std::string message;
};

struct ValidityReport {
  bool valid = true;
  std::size_t pairs_tested = 0;
  std::vector<Violation> violations;
};

struct ValidationOptions {
  // Distance tolerance relative to the bounding-box diagonal.
  double tol = 1e-9;
  // Barycentric margin used when testing for interior contact.
  double margin = 1e-7;
  std::size_t max_violations = 32;
};

// Checks cell arity and indices, duplicate and degenerate cells, coincident
// vertices, and that every pair of cells meets in a common face or not at all.
// The pairwise test clips every edge of one cell against the relative
// interiors of the faces of the other; it is complete for cells of dimension
// up to 3 in R^3.
ValidityReport validate_complex(const SimplicialComplex& c, const ValidationOptions& opts = {});

}  // namespace fatmesh
