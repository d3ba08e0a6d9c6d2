#include "fatmesh/manifold.hpp"

#include "fatmesh/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fatmesh {

bool Region::contains(const Point& x, double slack) const {
  const double d = (x - center).norm();
  if (is_point()) return d <= slack;
  return d >= r_inner - slack && d <= r_outer + slack;
}

std::vector<Eigen::MatrixXd> EmbeddedManifold::hessians(const Point& x) const {
  const int nu = ambient_dim();
  const int m = codim();
  const double h = 1e-5 * std::max(1.0, x.norm());
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(nu, nu));
  for (int i = 0; i < nu; ++i) {
    Point xp = x;
    Point xm = x;
    xp[i] += h;
    xm[i] -= h;
    const Eigen::MatrixXd dj = (jacobian(xp) - jacobian(xm)) / (2.0 * h);
    for (int k = 0; k < m; ++k) out[static_cast<std::size_t>(k)].col(i) = dj.row(k).transpose();
  }
  for (auto& hm : out) hm = 0.5 * (hm + hm.transpose()).eval();
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Point vec3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

// Orthonormal pair completing the unit vector u in R^3.
void complete_basis(const Point& u, Point& e1, Point& e2) {
  const Eigen::Vector3d a = u.head<3>();
  Eigen::Vector3d t = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d b1 = (t - a.dot(t) * a).normalized();
  Eigen::Vector3d b2 = a.cross(b1);
  e1 = b1;
  e2 = b2;
}

// Uniform point in the disk of given radius around (cx, cy).
std::pair<double, double> disk_point(Rng& rng, double cx, double cy, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  const double t = uniform(rng, 0.0, 2.0 * kPi);
  return {cx + r * std::cos(t), cy + r * std::sin(t)};
}

class Sphere final : public EmbeddedManifold {
 public:
  explicit Sphere(double radius) : r_(radius) {}
  std::string name() const override { return "sphere"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = (x.squaredNorm() - r_ * r_) / (2.0 * r_);
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override { return x.transpose() / r_; }
  std::vector<Eigen::MatrixXd> hessians(const Point&) const override {
    return {Eigen::MatrixXd::Identity(3, 3) / r_};
  }
  bool is_compact() const override { return true; }
  double diameter() const override { return 2.0 * r_; }
  std::optional<double> analytic_reach() const override { return r_; }
  Point default_base_point() const override { return vec3(0, 0, r_); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double cn = center.norm();
    Point axis = cn > 0 ? Point(center / cn) : vec3(0, 0, 1);
    double cos_alpha = -1.0;
    if (std::abs(cn - r_) < 1e-9 * r_ && radius < 2.0 * r_) {
      const double half = std::asin(std::min(1.0, radius / (2.0 * r_)));
      cos_alpha = std::cos(2.0 * half);
    }
    const double z = uniform(rng, cos_alpha, 1.0);
    const double phi = uniform(rng, 0.0, 2.0 * kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    Point e1;
    Point e2;
    complete_basis(axis, e1, e2);
    out = r_ * (z * axis + s * (std::cos(phi) * e1 + std::sin(phi) * e2));
    return (out - center).norm() <= radius;
  }

 private:
  double r_;
};

class Cylinder final : public EmbeddedManifold {
 public:
  explicit Cylinder(double radius) : r_(radius) {}
  std::string name() const override { return "cylinder"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = (x[0] * x[0] + x[1] * x[1] - r_ * r_) / (2.0 * r_);
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    Eigen::MatrixXd j(1, 3);
    j << x[0] / r_, x[1] / r_, 0.0;
    return j;
  }
  std::vector<Eigen::MatrixXd> hessians(const Point&) const override {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 0) = h(1, 1) = 1.0 / r_;
    return {h};
  }
  bool is_compact() const override { return false; }
  std::optional<double> analytic_reach() const override { return r_; }
  Point default_base_point() const override { return vec3(r_, 0, 0); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    const double z = uniform(rng, center[2] - radius, center[2] + radius);
    out = vec3(r_ * std::cos(t), r_ * std::sin(t), z);
    return (out - center).norm() <= radius;
  }

 private:
  double r_;
};

// z = a (x^2 + y^2)
class Paraboloid final : public EmbeddedManifold {
 public:
  explicit Paraboloid(double a) : a_(a) {}
  std::string name() const override { return "paraboloid"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = a_ * (x[0] * x[0] + x[1] * x[1]) - x[2];
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    Eigen::MatrixXd j(1, 3);
    j << 2.0 * a_ * x[0], 2.0 * a_ * x[1], -1.0;
    return j;
  }
  std::vector<Eigen::MatrixXd> hessians(const Point&) const override {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 0) = h(1, 1) = 2.0 * a_;
    return {h};
  }
  bool is_compact() const override { return false; }
  std::optional<double> analytic_reach() const override { return 1.0 / (2.0 * a_); }
  Point default_base_point() const override { return vec3(0, 0, 0); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const auto [x, y] = disk_point(rng, center[0], center[1], radius);
    const double rmax = std::hypot(center[0], center[1]) + radius;
    const double wmax = std::sqrt(1.0 + 4.0 * a_ * a_ * rmax * rmax);
    const double w = std::sqrt(1.0 + 4.0 * a_ * a_ * (x * x + y * y));
    if (uniform(rng, 0.0, wmax) > w) return false;
    out = vec3(x, y, a_ * (x * x + y * y));
    return (out - center).norm() <= radius;
  }

 private:
  double a_;
};

// z = 0 in R^3
class Plane final : public EmbeddedManifold {
 public:
  std::string name() const override { return "plane"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = x[2];
    return f;
  }
  Eigen::MatrixXd jacobian(const Point&) const override {
    Eigen::MatrixXd j(1, 3);
    j << 0, 0, 1;
    return j;
  }
  std::vector<Eigen::MatrixXd> hessians(const Point&) const override { return {Eigen::MatrixXd::Zero(3, 3)}; }
  bool is_compact() const override { return false; }
  std::optional<double> analytic_reach() const override { return std::numeric_limits<double>::infinity(); }
  Point default_base_point() const override { return vec3(0, 0, 0); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const auto [x, y] = disk_point(rng, center[0], center[1], radius);
    out = vec3(x, y, 0.0);
    return (out - center).norm() <= radius;
  }
};

// x^2 + y^2 = c^2 cosh^2(z / c)
class Catenoid final : public EmbeddedManifold {
 public:
  explicit Catenoid(double waist) : c_(waist) {}
  std::string name() const override { return "catenoid"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = std::hypot(x[0], x[1]) - c_ * std::cosh(x[2] / c_);
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    const double rho = std::max(std::hypot(x[0], x[1]), 1e-300);
    Eigen::MatrixXd j(1, 3);
    j << x[0] / rho, x[1] / rho, -std::sinh(x[2] / c_);
    return j;
  }
  std::vector<Eigen::MatrixXd> hessians(const Point& x) const override {
    const double rho = std::max(std::hypot(x[0], x[1]), 1e-300);
    const double r3 = rho * rho * rho;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 0) = x[1] * x[1] / r3;
    h(1, 1) = x[0] * x[0] / r3;
    h(0, 1) = h(1, 0) = -x[0] * x[1] / r3;
    h(2, 2) = -std::cosh(x[2] / c_) / c_;
    return {h};
  }
  bool is_compact() const override { return false; }
  std::optional<double> analytic_reach() const override { return c_; }
  Point default_base_point() const override { return vec3(c_, 0, 0); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double z = uniform(rng, center[2] - radius, center[2] + radius);
    const double zmax = std::max(std::abs(center[2] - radius), std::abs(center[2] + radius));
    const double ch = std::cosh(z / c_);
    const double chmax = std::cosh(zmax / c_);
    if (uniform(rng, 0.0, chmax * chmax) > ch * ch) return false;
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    out = vec3(c_ * ch * std::cos(t), c_ * ch * std::sin(t), z);
    return (out - center).norm() <= radius;
  }

 private:
  double c_;
};

class Torus final : public EmbeddedManifold {
 public:
  Torus(double major, double minor) : big_(major), small_(minor) {}
  std::string name() const override { return "torus"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  Eigen::VectorXd residual(const Point& x) const override {
    const double s = std::hypot(x[0], x[1]);
    Eigen::VectorXd f(1);
    f[0] = std::hypot(s - big_, x[2]) - small_;
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    const double s = std::max(std::hypot(x[0], x[1]), 1e-300);
    const double d = std::max(std::hypot(s - big_, x[2]), 1e-300);
    const double k = (s - big_) / (d * s);
    Eigen::MatrixXd j(1, 3);
    j << k * x[0], k * x[1], x[2] / d;
    return j;
  }
  bool is_compact() const override { return true; }
  double diameter() const override { return 2.0 * (big_ + small_); }
  std::optional<double> analytic_reach() const override { return std::min(small_, big_ - small_); }
  Point default_base_point() const override { return vec3(big_ + small_, 0, 0); }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double phi = uniform(rng, 0.0, 2.0 * kPi);
    if (uniform(rng, 0.0, big_ + small_) > big_ + small_ * std::cos(phi)) return false;
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    const double s = big_ + small_ * std::cos(phi);
    out = vec3(s * std::cos(t), s * std::sin(t), small_ * std::sin(phi));
    return (out - center).norm() <= radius;
  }

 private:
  double big_;
  double small_;
};

// Circle of radius r in R^2, the 1-manifold entry of the catalog.
class Circle final : public EmbeddedManifold {
 public:
  explicit Circle(double radius) : r_(radius) {}
  std::string name() const override { return "circle"; }
  int ambient_dim() const override { return 2; }
  int intrinsic_dim() const override { return 1; }
  Eigen::VectorXd residual(const Point& x) const override {
    Eigen::VectorXd f(1);
    f[0] = (x.squaredNorm() - r_ * r_) / (2.0 * r_);
    return f;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override { return x.transpose() / r_; }
  std::vector<Eigen::MatrixXd> hessians(const Point&) const override {
    return {Eigen::MatrixXd::Identity(2, 2) / r_};
  }
  bool is_compact() const override { return true; }
  double diameter() const override { return 2.0 * r_; }
  std::optional<double> analytic_reach() const override { return r_; }
  Point default_base_point() const override {
    Point p(2);
    p << r_, 0;
    return p;
  }
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    out.resize(2);
    out << r_ * std::cos(t), r_ * std::sin(t);
    return (out - center).norm() <= radius;
  }

 private:
  double r_;
};

class SphereSlice final : public EmbeddedManifold {
 public:
  SphereSlice(ManifoldPtr base, Point center, double radius)
      : base_(std::move(base)), c_(std::move(center)), r_(radius) {
    if (base_->intrinsic_dim() < 1) throw InvalidInputError("cannot slice a 0-manifold");
    if (!(r_ > 0.0)) throw InvalidInputError("slice radius must be positive");
  }
  std::string name() const override { return base_->name() + "-slice"; }
  int ambient_dim() const override { return base_->ambient_dim(); }
  int intrinsic_dim() const override { return base_->intrinsic_dim() - 1; }
  Eigen::VectorXd residual(const Point& x) const override {
    const Eigen::VectorXd f = base_->residual(x);
    Eigen::VectorXd out(f.size() + 1);
    out << f, ((x - c_).squaredNorm() - r_ * r_) / (2.0 * r_);
    return out;
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    const Eigen::MatrixXd j = base_->jacobian(x);
    Eigen::MatrixXd out(j.rows() + 1, j.cols());
    out << j, (x - c_).transpose() / r_;
    return out;
  }
  std::vector<Eigen::MatrixXd> hessians(const Point& x) const override {
    auto h = base_->hessians(x);
    h.push_back(Eigen::MatrixXd::Identity(ambient_dim(), ambient_dim()) / r_);
    return h;
  }
  bool is_compact() const override { return true; }
  double diameter() const override { return 2.0 * r_; }
  std::optional<double> analytic_reach() const override { return std::nullopt; }
  Point default_base_point() const override {
    Rng rng(0);
    Point out;
    for (int i = 0; i < 10000; ++i) {
      if (propose(rng, c_, 2.0 * r_, out)) return out;
    }
    throw EmptyRegionError("cutting surface is empty");
  }
  // Proposals are base-manifold points near the slice pushed onto it, so
  // they are not area-uniform along the slice.
  bool propose(Rng& rng, const Point& center, double radius, Point& out) const override {
    const double band = 0.25 * std::min(r_, radius);
    const Region shell{c_, std::max(0.0, r_ - band), r_ + band};
    const double outer = std::min(radius, (center - c_).norm() + r_ + band);
    Point q;
    if (!base_->propose(rng, center, outer, q)) return false;
    if (!shell.contains(q)) return false;
    try {
      out = project_to_manifold(*this, q);
    } catch (const ProjectionError&) {
      return false;
    }
    return (out - center).norm() <= radius;
  }

 private:
  ManifoldPtr base_;
  Point c_;
  double r_;
};

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("manifold.params." + key, "must be a positive finite number");
  }
  return v;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"sphere", "cylinder", "paraboloid", "plane", "catenoid", "torus", "circle"};
}

ManifoldPtr make_manifold(const std::string& name, const std::map<std::string, double>& params_in) {
  auto params = params_in;
  ManifoldPtr out;
  if (name == "sphere") {
    out = std::make_shared<Sphere>(take(params, "radius", 1.0));
  } else if (name == "cylinder") {
    out = std::make_shared<Cylinder>(take(params, "radius", 1.0));
  } else if (name == "paraboloid") {
    out = std::make_shared<Paraboloid>(take(params, "curvature", 1.0));
  } else if (name == "plane") {
    out = std::make_shared<Plane>();
  } else if (name == "catenoid") {
    out = std::make_shared<Catenoid>(take(params, "waist", 1.0));
  } else if (name == "torus") {
    const double major = take(params, "major", 2.0);
    const double minor = take(params, "minor", 0.75);
    if (minor >= major) throw ConfigError("manifold.params.minor", "must be smaller than major");
    out = std::make_shared<Torus>(major, minor);
  } else if (name == "circle") {
    out = std::make_shared<Circle>(take(params, "radius", 1.0));
  } else {
    std::ostringstream msg;
    msg << "unknown manifold '" << name << "'; valid names:";
    for (const auto& n : catalog_names()) msg << ' ' << n;
    throw ConfigError("manifold.name", msg.str());
  }
  if (!params.empty()) {
    throw ConfigError("manifold.params." + params.begin()->first, "unknown parameter for " + name);
  }
  return out;
}

ManifoldPtr make_sphere_slice(ManifoldPtr base, Point center, double radius) {
  return std::make_shared<SphereSlice>(std::move(base), std::move(center), radius);
}

std::optional<Point> sample_region(const EmbeddedManifold& m, const Region& region, Rng& rng, int max_attempts) {
  if (region.is_point()) return region.center;
  const double radius = region.r_outer;
  if (!std::isfinite(radius) && !m.is_compact()) {
    throw InvalidInputError("unbounded region on an unbounded manifold");
  }
  Point x;
  for (int i = 0; i < max_attempts; ++i) {
    if (m.propose(rng, region.center, radius, x) && region.contains(x)) return x;
  }
  return std::nullopt;
}

std::vector<Point> sample_region_n(const EmbeddedManifold& m, const Region& region, Rng& rng, std::size_t count,
                                   int max_attempts) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto p = sample_region(m, region, rng, max_attempts);
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

Point project_to_manifold(const EmbeddedManifold& m, const Point& p, const ProjectionOptions& opts) {
  const int nu = m.ambient_dim();
  const int k = m.codim();
  if (p.size() != nu) throw InvalidInputError("point dimension does not match the ambient space");

  Point q = p;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
  const double scale = 1.0 + p.norm();

  auto system = [&](const Point& x, const Eigen::VectorXd& lam, Eigen::VectorXd& g) {
    const Eigen::MatrixXd j = m.jacobian(x);
    g.resize(nu + k);
    g.head(nu) = x - p + j.transpose() * lam;
    g.tail(k) = m.residual(x);
  };

  Eigen::VectorXd g;
  system(q, lambda, g);
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (g.tail(k).norm() <= opts.residual_tol && g.head(nu).norm() <= 1e-13 * scale) break;
    const Eigen::MatrixXd j = m.jacobian(q);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nu + k, nu + k);
    kkt.topLeftCorner(nu, nu).setIdentity();
    const auto hs = m.hessians(q);
    for (int c = 0; c < k; ++c) kkt.topLeftCorner(nu, nu) += lambda[c] * hs[static_cast<std::size_t>(c)];
    kkt.topRightCorner(nu, k) = j.transpose();
    kkt.bottomLeftCorner(k, nu) = j;
    Eigen::VectorXd step = kkt.fullPivLu().solve(-g);
    if (!step.allFinite()) step = kkt.completeOrthogonalDecomposition().solve(-g);

    const double merit = g.squaredNorm();
    double t = 1.0;
    Point q_next;
    Eigen::VectorXd lam_next;
    Eigen::VectorXd g_next;
    for (int ls = 0; ls < 30; ++ls) {
      q_next = q + t * step.head(nu);
      lam_next = lambda + t * step.tail(k);
      system(q_next, lam_next, g_next);
      if (g_next.allFinite() && g_next.squaredNorm() <= (1.0 - 1e-4 * t) * merit) break;
      t *= 0.5;
    }
    if (!g_next.allFinite()) break;
    const double moved = (q_next - q).norm();
    q = q_next;
    lambda = lam_next;
    g = g_next;
    if (moved <= 1e-16 * scale) break;
  }
  const double f = g.tail(k).norm();
  const double station = g.head(nu).norm();
  if (!(f < 1e-10) || !(station <= 1e-8 * scale)) {
    throw ProjectionError("projection onto " + m.name() + " did not converge", q);
  }
  return q;
}

Eigen::MatrixXd tangent_frame(const EmbeddedManifold& m, const Point& x) {
  const Eigen::MatrixXd j = m.jacobian(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-8) {
    throw SingularPointError("Jacobian of " + m.name() + " is rank deficient at this point");
  }
  return svd.matrixV().rightCols(m.intrinsic_dim());
}

Point unit_normal(const EmbeddedManifold& m, const Point& x) {
  if (m.codim() != 1) throw InvalidInputError("unit normal needs a hypersurface");
  const Point g = m.jacobian(x).row(0).transpose();
  const double n = g.norm();
  if (n <= 1e-8) throw SingularPointError("gradient vanishes");
  return g / n;
}

std::optional<Point> solve_on_manifold(const EmbeddedManifold& m, std::span<const LinearConstraint> linear,
                                       const Point* sphere_center, double sphere_radius, Point guess,
                                       int max_iterations) {
  const int nu = m.ambient_dim();
  const int k = m.codim();
  const int rows = k + static_cast<int>(linear.size()) + (sphere_center ? 1 : 0);
  const double scale = 1.0 + guess.norm();

  auto eval = [&](const Point& x, Eigen::VectorXd& g, Eigen::MatrixXd* jac) {
    g.resize(rows);
    g.head(k) = m.residual(x);
    if (jac) {
      jac->resize(rows, nu);
      jac->topRows(k) = m.jacobian(x);
    }
    int r = k;
    for (const auto& c : linear) {
      g[r] = c.a.dot(x) - c.b;
      if (jac) jac->row(r) = c.a.transpose();
      ++r;
    }
    if (sphere_center) {
      g[r] = ((x - *sphere_center).squaredNorm() - sphere_radius * sphere_radius) / (2.0 * sphere_radius);
      if (jac) jac->row(r) = (x - *sphere_center).transpose() / sphere_radius;
    }
  };

  Point x = std::move(guess);
  const Point start = x;
  Eigen::VectorXd g;
  Eigen::MatrixXd jac;
  eval(x, g, &jac);
  for (int it = 0; it < max_iterations; ++it) {
    if (g.norm() <= 1e-14 * scale) break;
    // Row-normalize so constraints with large coefficients do not dominate.
    Eigen::VectorXd w = jac.rowwise().norm();
    for (int r = 0; r < rows; ++r) w[r] = w[r] > 0 ? 1.0 / w[r] : 1.0;
    const Eigen::MatrixXd js = w.asDiagonal() * jac;
    const Eigen::VectorXd gs = w.asDiagonal() * g;
    const Eigen::VectorXd step = js.completeOrthogonalDecomposition().solve(-gs);
    if (!step.allFinite()) return std::nullopt;
    const double merit = gs.squaredNorm();
    double t = 1.0;
    Point xn;
    Eigen::VectorXd gn;
    for (int ls = 0; ls < 30; ++ls) {
      xn = x + t * step;
      eval(xn, gn, nullptr);
      if (gn.allFinite() && (w.asDiagonal() * gn).squaredNorm() <= (1.0 - 1e-4 * t) * merit) break;
      t *= 0.5;
    }
    if (!gn.allFinite()) return std::nullopt;
    const double moved = (xn - x).norm();
    x = xn;
    eval(x, g, &jac);
    if ((x - start).norm() > 1e3 * scale) return std::nullopt;
    if (moved <= 1e-16 * scale) break;
  }
  if (!(g.norm() <= 1e-10 * scale)) return std::nullopt;
  return x;
}

std::optional<Point> equal_power_point(const EmbeddedManifold& m, std::span<const Point> sites,
                                       std::span<const double> weights) {
  if (sites.empty()) return std::nullopt;
  const auto count = sites.size();
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 1; i < count; ++i) {
    const double wi = weights.empty() ? 0.0 : weights[i];
    const double w0 = weights.empty() ? 0.0 : weights[0];
    cons.push_back({2.0 * (sites[i] - sites[0]), sites[i].squaredNorm() - sites[0].squaredNorm() - wi + w0});
  }
  Point centroid = Point::Zero(sites[0].size());
  for (const auto& s : sites) centroid += s;
  centroid /= static_cast<double>(count);
  Point guess = centroid;
  if (!cons.empty()) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(cons.size()), centroid.size());
    Eigen::VectorXd b(static_cast<Eigen::Index>(cons.size()));
    for (std::size_t i = 0; i < cons.size(); ++i) {
      a.row(static_cast<Eigen::Index>(i)) = cons[i].a.transpose();
      b[static_cast<Eigen::Index>(i)] = cons[i].b;
    }
    const Eigen::MatrixXd aat = a * a.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(aat);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * aat.norm()) {
      return std::nullopt;
    }
    guess = centroid + a.transpose() * ldlt.solve(b - a * centroid);
  }
  return solve_on_manifold(m, cons, nullptr, 0.0, guess);
}

}  // namespace fatmesh
