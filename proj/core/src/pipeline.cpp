#include "fatmesh/pipeline.hpp"

#include "fatmesh/error.hpp"
#include "fatmesh/topology.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace fatmesh {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Exhaustion build_exhaustion(const ManifoldPtr& m, const Point& x0, int num_stages, const ExhaustionOptions& opts) {
  if (num_stages < 1) throw InvalidInputError("exhaustion needs at least one stage");
  Exhaustion ex;
  ex.base = x0;
  const double extent = m->is_compact() ? m->diameter() : opts.extent;
  const double half = 0.5 * opts.step_cap;
  Rng rng(mix_seed(opts.seed, 1));

  double r = 0.0;
  for (int j = 1; j <= num_stages; ++j) {
    const Region shell{x0, std::max(0.0, r - half), r + half};
    const auto samples = sample_region_n(*m, shell, rng, static_cast<std::size_t>(opts.radius_samples));
    if (samples.size() < 2) throw ExhaustionStallError("too few samples near the cut surface", static_cast<std::size_t>(j));
    const double omega = estimate_osculatory_radius(*m, samples, opts.reach_cap).omega;
    if (omega < 4.0 * opts.eta_floor) {
      throw ExhaustionStallError("osculatory radius " + std::to_string(omega) + " below the floor at stage " +
                                     std::to_string(j),
                                 static_cast<std::size_t>(j));
    }
    double next = r + std::min(0.5 * omega, opts.step_cap);
    const bool reached = next >= extent * (1.0 - 1e-9);
    if (reached || j == num_stages) next = extent;
    ExhaustionStage st;
    st.index = static_cast<std::size_t>(j);
    st.r_inner = r;
    st.r_outer = next;
    st.step_omega = omega;
    if (m->is_compact() && next >= extent * (1.0 - 1e-9)) {
      st.r_outer = kInf;
      ex.covers_manifold = true;
    }
    ex.stages.push_back(st);
    r = next;
    if (reached) break;
  }

  for (auto& st : ex.stages) {
    const Region u = st.u_region(x0);
    const auto samples = sample_region_n(*m, u, rng, static_cast<std::size_t>(opts.radius_samples));
    if (samples.size() < 2) throw ExhaustionStallError("annulus too thin to estimate radii", st.index);
    const auto osc = estimate_osculatory_radius(*m, samples, opts.reach_cap);
    st.radii.region_id = st.index;
    st.radii.omega = osc.omega;
    st.radii.omega_flat = osc.flat;
    const double reach = std::isfinite(st.r_outer) ? st.r_outer + 3.0 * osc.omega : kInf;
    const Region ball{x0, 0.0, (m->is_compact() && reach >= m->diameter()) ? kInf : reach};
    const auto pool = sample_region_n(*m, ball, rng, static_cast<std::size_t>(opts.radius_samples));
    ConnectivityOptions copt;
    copt.cap = 2.0 * osc.omega;
    copt.grid = opts.connectivity_grid;
    copt.centers = u;
    st.radii.kappa = estimate_connectivity_radius(pool, osc.omega, copt);
    st.radii.sample_count = samples.size() + pool.size();
  }
  return ex;
}

StageMesh mesh_stage(const ManifoldPtr& m, const Region& region, double eta, const StageMeshOptions& opts,
                     double phi0) {
  if (!(eta > 0.0)) throw InvalidInputError("stage eta must be positive");
  const double eps = 0.5 * eta;
  StageMesh out;
  out.region = region;

  std::vector<double> rings;
  if (region.has_inner_boundary()) rings.push_back(region.r_inner);
  if (region.has_outer_boundary()) rings.push_back(region.r_outer);
  rings.insert(rings.end(), opts.cut_rings.begin(), opts.cut_rings.end());

  NetOptions nopt;
  nopt.rejection_streak = opts.rejection_streak;
  std::uint64_t tag = 10;
  for (double rho : rings) {
    ++tag;
    if (m->is_compact() && rho >= m->diameter()) continue;
    const auto slice = cutting_surface(m, region.center, rho);
    try {
      NetOptions ropt;
      ropt.rejection_streak = opts.rejection_streak;
      const auto ring = maximal_net(*slice, Region{region.center}, eps, mix_seed(opts.seed, tag), ropt);
      nopt.seed_points.insert(nopt.seed_points.end(), ring.points.begin(), ring.points.end());
    } catch (const EmptyRegionError&) {
      // The cut misses M.
    }
  }

  out.net = maximal_net(*m, region, eps, mix_seed(opts.seed, 1), nopt);
  out.ring_vertices = out.net.seeded;
  DirichletOptions dopt;
  dopt.density = opts.witness_density;
  dopt.seed = mix_seed(opts.seed, 2);
  const auto dc = dirichlet_complex(out.net, region, *m, dopt);
  out.mesh = project_dual(dual_complex(dc, *m), *m);
  out.fatness = verify_fatness(out.mesh, phi0);
  return out;
}

std::string mesh_digest(const SimplicialComplex& c) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& v : c.vertices) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double x = v[i];
      feed(&x, sizeof x);
    }
  }
  for (const auto& cell : c.cells) {
    for (int v : cell) {
      const std::int64_t x = v;
      feed(&x, sizeof x);
    }
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(cfg);
  PipelineResult res;
  res.config = cfg;
  const auto m = make_manifold(cfg.manifold, cfg.params);
  if (m->intrinsic_dim() != 2) throw ConfigError("manifold.name", "the pipeline meshes surfaces only");

  Point x0 = m->default_base_point();
  if (cfg.base_point) {
    x0 = Eigen::Map<const Eigen::VectorXd>(cfg.base_point->data(), static_cast<Eigen::Index>(cfg.base_point->size()));
    x0 = project_to_manifold(*m, x0);
  }
  res.base_point = x0;

  ExhaustionOptions eopt;
  eopt.extent = cfg.extent;
  eopt.step_cap = cfg.step_cap;
  eopt.eta_floor = cfg.eta_floor;
  eopt.reach_cap = cfg.reach_cap;
  eopt.radius_samples = cfg.sampling.radius_samples;
  eopt.connectivity_grid = cfg.sampling.connectivity_grid;
  eopt.seed = mix_seed(cfg.seed, 100);
  auto ex = build_exhaustion(m, x0, cfg.num_stages, eopt);
  if (static_cast<int>(ex.stages.size()) < cfg.num_stages) {
    res.warnings.push_back("exhaustion covered the manifold after " + std::to_string(ex.stages.size()) + " stages");
  }

  std::vector<OmegaTriple> triples;
  for (std::size_t j = 0; j < ex.stages.size(); ++j) {
    const double here = ex.stages[j].radii.omega;
    const double prev = j > 0 ? ex.stages[j - 1].radii.omega : here;
    const double next = j + 1 < ex.stages.size() ? ex.stages[j + 1].radii.omega : here;
    triples.push_back({prev, here, next});
  }
  ScheduleOptions sopt;
  sopt.decay = cfg.decay;
  if (cfg.epsilon) {
    sopt.initial_eta = 2.0 * *cfg.epsilon;
    sopt.enforce_omega_bound = false;
  }
  const auto schedule = build_eta_schedule(triples, sopt);
  for (std::size_t j = 0; j < schedule.etas.size(); ++j) {
    if (!schedule.bound_satisfied[j]) {
      res.warnings.push_back("stage " + std::to_string(j + 1) + ": eta exceeds a quarter of the osculatory radius");
    }
    if (schedule.etas[j] < cfg.eta_floor) {
      throw StageError(j + 1, "eta " + std::to_string(schedule.etas[j]) + " fell below eta_floor");
    }
  }

  // Stage regions overlap by 2 max(eta_j, eta_{j+1}) around each cut R_j;
  // the next stage also carries a cut ring one net radius beyond the overlap
  // where its exposed boundary will sit after mashing.
  std::size_t count = ex.stages.size();
  std::vector<double> collar(count, 0.0);
  std::vector<double> cut_ring(count, 0.0);
  auto eps_of = [&](std::size_t j) { return 0.5 * schedule.etas[j]; };
  for (std::size_t j = 0; j + 1 < count; ++j) {
    collar[j] = std::max(schedule.etas[j], schedule.etas[j + 1]);
    cut_ring[j] = ex.stages[j].r_outer + collar[j] + eps_of(j + 1);
    if (m->is_compact() && cut_ring[j] >= m->diameter() - 0.5 * eps_of(j + 1)) {
      res.warnings.push_back("stage " + std::to_string(j + 1) + " closes the manifold; later stages dropped");
      count = j + 1;
      ex.stages[j].r_outer = kInf;
      ex.covers_manifold = true;
      break;
    }
  }
  ex.stages.resize(count);
  res.covers_manifold = ex.covers_manifold;

  std::vector<StageMesh> meshes;
  for (std::size_t j = 0; j < count; ++j) {
    const auto& st = ex.stages[j];
    Region region{x0, j == 0 ? 0.0 : std::max(0.0, ex.stages[j - 1].r_outer - collar[j - 1]),
                  j + 1 < count ? st.r_outer + collar[j] : st.r_outer};
    if (m->is_compact() && std::isfinite(region.r_outer) && region.r_outer >= m->diameter() - eps_of(j)) {
      region.r_outer = kInf;
    }
    StageMeshOptions mopt;
    mopt.seed = mix_seed(cfg.seed, 1000 + j);
    mopt.rejection_streak = cfg.sampling.rejection_streak;
    mopt.witness_density = cfg.sampling.witness_density;
    if (j > 0) mopt.cut_rings.push_back(cut_ring[j - 1]);
    if (j > 0 && std::isfinite(region.r_outer) && region.r_outer - cut_ring[j - 1] < 2.0 * eps_of(j)) {
      throw StageError(j + 1, "stage is narrower than its collar; lower epsilon or use fewer stages");
    }
    try {
      meshes.push_back(mesh_stage(m, region, schedule.etas[j], mopt, cfg.phi0));
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(j + 1, e.what());
    }
    const auto& sm = meshes.back();
    if (sm.mesh.complex.cells.empty()) throw StageError(j + 1, "stage mesh has no cells");

    StageReport rep;
    rep.index = st.index;
    rep.r_inner = st.r_inner;
    rep.r_outer = st.r_outer;
    rep.mesh_inner = region.r_inner;
    rep.mesh_outer = region.r_outer;
    rep.eta = schedule.etas[j];
    rep.epsilon = eps_of(j);
    rep.eta_bound_satisfied = schedule.bound_satisfied[j] != 0;
    rep.radii = st.radii;
    rep.inequality = check_reach_inequality(st.radii);
    rep.net_size = sm.net.points.size();
    rep.vertices = sm.mesh.complex.vertices.size();
    rep.cells = sm.mesh.complex.cells.size();
    rep.min_phi = sm.fatness.report.min_thickness;
    rep.valid = sm.mesh.validity.valid;
    res.stages.push_back(rep);
  }

  for (std::size_t j = 0; j + 1 < count; ++j) {
    const Region band{x0, std::max(0.0, ex.stages[j].r_outer - collar[j]), ex.stages[j].r_outer + collar[j]};
    res.stages[j].gluing = check_gluing(*m, meshes[j].net, meshes[j + 1].net, band, mix_seed(cfg.seed, 2000 + j));
  }

  SimplicialComplex acc = compact_vertices(meshes[0].mesh.complex);
  for (std::size_t j = 1; j < count; ++j) {
    const Region collar_region{x0, std::max(0.0, ex.stages[j - 1].r_outer - collar[j - 1]), cut_ring[j - 1]};
    try {
      auto mr = mash(acc, meshes[j].mesh.complex, collar_region);
      acc = compact_vertices(mr.complex);
      res.mashes.push_back({j + 1, mr.c, mr.bridge_cells, mr.bridge_min_phi, mr.ring_first, mr.ring_second});
    } catch (const Error& e) {
      throw StageError(j + 1, e.what());
    }
  }

  if (cfg.thicken_rounds > 0) {
    auto th = thicken(acc, m.get(), cfg.thicken_rounds);
    acc = std::move(th.complex);
    res.thicken_history = std::move(th.min_phi_per_round);
  }

  res.mesh = std::move(acc);
  res.validity = validate_complex(res.mesh);
  res.thickness = complex_thickness(res.mesh);
  res.euler_characteristic = euler_characteristic(res.mesh);
  res.boundary_loops = boundary_loops(res.mesh).size();
  res.certified = res.validity.valid && res.thickness.min_thickness > 0.0 && res.thickness.min_thickness >= cfg.phi0;
  res.digest = mesh_digest(res.mesh);
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace fatmesh
