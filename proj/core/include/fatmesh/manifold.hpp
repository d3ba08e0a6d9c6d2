#pragma once

#include "fatmesh/geometry.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fatmesh {

using Rng = std::mt19937_64;

// M ∩ {r_inner <= |x - center| <= r_outer}. r_outer = 0 denotes the single
// point {center}; r_outer = inf with a compact manifold denotes all of M.
struct Region {
  Point center;
  double r_inner = 0.0;
  double r_outer = std::numeric_limits<double>::infinity();

  bool is_point() const { return r_outer == 0.0; }
  bool contains(const Point& x, double slack = 0.0) const;
  bool has_outer_boundary() const { return std::isfinite(r_outer) && r_outer > 0.0; }
  bool has_inner_boundary() const { return r_inner > 0.0; }
};

// An embedded n-manifold M in R^nu described implicitly as F^{-1}(0) with
// F: R^nu -> R^(nu - n). Every catalog entry also knows how to draw
// area-uniform proposals, which is what the samplers build on.
class EmbeddedManifold {
 public:
  virtual ~EmbeddedManifold() = default;

  virtual std::string name() const = 0;
  virtual int ambient_dim() const = 0;
  virtual int intrinsic_dim() const = 0;
  int codim() const { return ambient_dim() - intrinsic_dim(); }

  virtual Eigen::VectorXd residual(const Point& x) const = 0;
  virtual Eigen::MatrixXd jacobian(const Point& x) const = 0;
  // One Hessian per component of F. Defaults to central differences of the
  // Jacobian.
  virtual std::vector<Eigen::MatrixXd> hessians(const Point& x) const;

  virtual bool is_compact() const = 0;
  // Ambient diameter; infinity for unbounded manifolds.
  virtual double diameter() const { return std::numeric_limits<double>::infinity(); }
  // Closed-form reach when known.
  virtual std::optional<double> analytic_reach() const = 0;
  virtual Point default_base_point() const = 0;

  // Draws one area-uniform proposal from a superset of M ∩ B(center, radius)
  // and reports whether it landed inside the ball.
  virtual bool propose(Rng& rng, const Point& center, double radius, Point& out) const = 0;
};

using ManifoldPtr = std::shared_ptr<const EmbeddedManifold>;

std::vector<std::string> catalog_names();

// Throws ConfigError for an unknown name (listing the valid ones), an unknown
// parameter, or a non-positive size parameter.
ManifoldPtr make_manifold(const std::string& name, const std::map<std::string, double>& params = {});

// M ∩ S(center, radius), the cutting surface of a ball exhaustion.
ManifoldPtr make_sphere_slice(ManifoldPtr base, Point center, double radius);

// A uniform sample of the region; nullopt when max_attempts proposals all miss.
std::optional<Point> sample_region(const EmbeddedManifold& m, const Region& region, Rng& rng,
                                   int max_attempts = 20000);

std::vector<Point> sample_region_n(const EmbeddedManifold& m, const Region& region, Rng& rng, std::size_t count,
                                   int max_attempts = 20000);

struct ProjectionOptions {
  int max_iterations = 50;
  double residual_tol = 1e-12;
};

// Closest point on M by damped Newton on the Lagrange system
// q - p + J(q)^T lambda = 0, F(q) = 0. Throws ProjectionError carrying the
// last iterate when it does not converge.
Point project_to_manifold(const EmbeddedManifold& m, const Point& p, const ProjectionOptions& opts = {});

// nu x n matrix with orthonormal columns spanning T_x M. Throws
// SingularPointError when the Jacobian loses rank.
Eigen::MatrixXd tangent_frame(const EmbeddedManifold& m, const Point& x);

// Unit normal of a hypersurface (codimension 1), following grad F.
Point unit_normal(const EmbeddedManifold& m, const Point& x);

// Constraint a . x = b.
struct LinearConstraint {
  Point a;
  double b = 0.0;
};

// Solves F(x) = 0 together with linear constraints and, optionally,
// |x - sphere_center| = sphere_radius, by (Gauss-)Newton from the guess.
std::optional<Point> solve_on_manifold(const EmbeddedManifold& m, std::span<const LinearConstraint> linear,
                                       const Point* sphere_center, double sphere_radius, Point guess,
                                       int max_iterations = 50);

// The point of M nearest the affine hull of the sites that has equal power
// |x - s|^2 - w to every site. Sites must number n+1 for an n-manifold to pin
// down a point; with fewer the result is the solution nearest the guess.
std::optional<Point> equal_power_point(const EmbeddedManifold& m, std::span<const Point> sites,
                                       std::span<const double> weights);

// --- radius estimators -----------------------------------------------------

struct OsculatoryEstimate {
  double omega = 0.0;
  bool flat = false;
  std::size_t pairs_used = 0;
};

// min over ordered pairs of |y - x|^2 / (2 dist(y - x, T_x)); pairs with a
// normal offset below 1e-12 are skipped. Returns cap with flat = true when
// every pair is skipped. Throws InvalidInputError for fewer than 2 samples.
OsculatoryEstimate estimate_osculatory_radius(const EmbeddedManifold& m, std::span<const Point> samples,
                                              double cap = 1.0);

struct ConnectivityOptions {
  // Largest radius tested; 0 takes the diameter of the sample set.
  double cap = 0.0;
  int grid = 64;
  // Neighborhood-graph edges join samples closer than edge_factor times the
  // largest nearest-neighbor distance.
  double edge_factor = 2.0;
  // Centers are the samples within omega of this region; all samples when
  // unset.
  std::optional<Region> centers;
};

// Largest grid radius r such that, for every center x and every s <= r, the
// samples in B(x, s) form a connected neighborhood graph. Throws
// ConnectivityError when some slice is already disconnected at the finest
// grid radius.
double estimate_connectivity_radius(std::span<const Point> samples, double omega,
                                    const ConnectivityOptions& opts = {});

struct RadiusEstimates {
  std::size_t region_id = 0;
  double omega = 0.0;
  double kappa = 0.0;
  std::size_t sample_count = 0;
  bool omega_flat = false;
};

struct InequalityCheck {
  bool pass = false;
  // (sqrt(3)/3) kappa - omega
  double margin = 0.0;
};

// omega <= (sqrt(3)/3) kappa (1 + slack).
InequalityCheck check_reach_inequality(const RadiusEstimates& est, double slack = 0.05);

}  // namespace fatmesh
