#include "zk/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "zk/data_sources.hpp"
#include "zk/diagnostics.hpp"
#include "zk/dispersion.hpp"
#include "zk/eigenbasis.hpp"
#include "zk/error.hpp"
#include "zk/potential.hpp"
#include "zk/quadrature.hpp"
#include "zk/semigroup.hpp"
#include "zk/solver.hpp"

namespace zk {
namespace {

constexpr double pi = std::numbers::pi;
using cd = std::complex<double>;

const BoundaryCase kCases[] = {BoundaryCase::DirichletDirichlet, BoundaryCase::NeumannNeumann,
                               BoundaryCase::DirichletNeumann, BoundaryCase::Periodic};

// Collects "name=value (<= tol)" fragments and the overall verdict.
class Checks {
 public:
  void le(const std::string& name, double value, double tol) {
    add(name, value, "<=", tol, value <= tol);
  }
  void ge(const std::string& name, double value, double tol) {
    add(name, value, ">=", tol, value >= tol);
  }
  void in(const std::string& name, double value, double lo, double hi) {
    std::ostringstream s;
    s.precision(3);
    s << name << "=" << value << " in [" << lo << ", " << hi << "]";
    push(s.str(), value >= lo && value <= hi);
  }
  void flag(const std::string& name, bool ok) { push(name + (ok ? "=yes" : "=NO"), ok); }
  void note(const std::string& text) { parts_.push_back(text); }

  bool ok() const { return ok_; }
  std::string text() const {
    std::string out;
    for (const auto& p : parts_) out += (out.empty() ? "" : "; ") + p;
    return out;
  }

 private:
  void add(const std::string& name, double value, const char* rel, double tol, bool ok) {
    std::ostringstream s;
    s.precision(3);
    s << name << "=" << value << " (" << rel << " " << tol << ")";
    push(s.str(), ok);
  }
  void push(std::string text, bool ok) {
    if (!ok) text += " FAIL";
    parts_.push_back(std::move(text));
    ok_ = ok_ && ok;
  }

  std::vector<std::string> parts_;
  bool ok_ = true;
};

void say(std::ostream* log, const std::string& text) {
  if (log) *log << "  " << text << std::endl;
}

double rel_l2(const Field& a, const Field& ref, std::size_t skip_left) {
  double e = 0.0, r = 0.0;
  for (std::size_t l = 0; l < a.modes(); ++l)
    for (std::size_t i = skip_left; i < a.points(); ++i) {
      e += std::pow(a(l, i) - ref(l, i), 2);
      r += ref(l, i) * ref(l, i);
    }
  return r > 0.0 ? std::sqrt(e / r) : std::sqrt(e);
}

double field_distance(const Field& a, const Field& b, const XGrid& g) {
  double s = 0.0;
  const std::vector<double> w = uniform_weights(g.size(), g.dx());
  for (std::size_t l = 0; l < a.modes(); ++l)
    for (std::size_t i = 0; i < a.points(); ++i) s += w[i] * std::pow(a(l, i) - b(l, i), 2);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

void eigenbasis_suite(Checks& c, std::ostream* log) {
  double ortho = 0.0, gram = 0.0, resid = 0.0;
  for (BoundaryCase bc : kCases) {
    for (double L : {1.0, pi, 5.0}) {
      const EigenBasis basis = build_basis(bc, L, 64);
      // Independent oracle: Gauss-Legendre products of the closed forms.
      const QuadratureRule gl = gauss_legendre(320, 0.0, L);
      Eigen::MatrixXd v(gl.nodes.size(), basis.size());
      for (std::size_t k = 0; k < gl.nodes.size(); ++k)
        for (std::size_t l = 0; l < basis.size(); ++l) v(k, l) = basis.evaluate(l, gl.nodes[k]);
      const Eigen::MatrixXd g =
          v.transpose() * Eigen::Map<const Eigen::VectorXd>(gl.weights.data(), gl.weights.size()).asDiagonal() * v;
      const auto n = static_cast<Eigen::Index>(basis.size());
      ortho = std::max(ortho, (g - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
      gram = std::max(gram, (basis.analysis_matrix() * basis.synthesis_matrix() - Eigen::MatrixXd::Identity(n, n))
                                .cwiseAbs()
                                .maxCoeff());
      for (std::size_t l = 0; l < basis.size(); ++l) {
        const double scale = 1.0 + basis.eigenvalue(l);
        for (double y : gl.nodes)
          resid = std::max(resid, std::abs(basis.evaluate(l, y, 2) + basis.eigenvalue(l) * basis.evaluate(l, y)) / scale);
      }
    }
  }
  say(log, "12 bases (4 cases x L in {1, pi, 5}), l_max = 64");
  c.le("orthonormality(GL)", ortho, 1e-10);
  c.le("orthonormality(nodes)", gram, 1e-10);
  c.le("eigen_residual/(1+lambda)", resid, 1e-8);
}

void cardano_suite(Checks& c, std::ostream* log) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> th(-1e3, 1e3), lam(0.0, 1e3), bb(-5.0, 5.0);
  double resid = 0.0;
  std::size_t asym = 0, positive_p = 0;
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) {
    const double t = th(rng), l = lam(rng), b = bb(rng);
    const DispersionRoot r = root_r0(t, l, b);
    resid = std::max(resid, root_residual(r.value, t, l, b) / (1.0 + std::pow(std::abs(r.value), 3)));
    if (root_r0(-t, l, b).value != std::conj(r.value)) ++asym;
    if (r.p() > 0.0) ++positive_p;
  }
  say(log, "1e5 random (theta, lambda, b)");
  c.le("root_residual", resid, 1e-10);
  c.le("conjugate_mismatches", static_cast<double>(asym), 0.0);
  c.le("roots_with_p>0", static_cast<double>(positive_p), 0.0);

  double window_p = 0.0, gap = 0.0;
  for (double l : {0.0, 0.5, 2.0}) {
    for (double b : {1.0, 3.0, 4.9}) {
      if (!(l < b)) continue;
      const double thr = window_threshold(l, b);
      for (int k = 0; k < 1000; ++k) {
        const double t = thr * (2.0 * (k + 0.5) / 1000.0 - 1.0);
        window_p = std::max(window_p, std::abs(root_r0(t, l, b).p()));
      }
      for (double s : {1.0, -1.0}) {
        const cd inside = root_r0(s * thr * (1.0 - 1e-13), l, b).value;
        const cd outside = root_r0(s * thr * (1.0 + 1e-13), l, b).value;
        gap = std::max(gap, std::abs(inside - outside));
      }
    }
  }
  c.le("window_|p|", window_p, 1e-12);
  c.le("window_edge_gap", gap, 1e-6);
}

void potential_suite(Checks& c, std::ostream* log) {
  const EigenBasis basis = build_basis(BoundaryCase::DirichletDirichlet, pi, 2);
  const TimeGrid g{801, 0.005};
  Field m(2, g.count);
  for (std::size_t n = 0; n < g.count; ++n) {
    const double t = g.t(n);
    const double env = std::exp(-std::pow((t - 2.0) / 0.6, 2));
    m(0, n) = env * std::sin(3.0 * t);
    m(1, n) = 0.5 * env * std::cos(2.0 * t);
  }
  const BoundaryData mu(g, m);
  const ModalSpectrum s = transform_mu(mu);
  const BoundaryPotential pot(s, basis, 0.0);

  const Field j0 = pot.eval(0.0);
  double err = 0.0, ref = 0.0;
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t n = 0; n < g.count; ++n) {
      err = std::max(err, std::abs(j0(l, n) - m(l, n)));
      ref = std::max(ref, std::abs(m(l, n)));
    }
  c.le("trace_rel_err", err / ref, 1e-10);

  double damp = 0.0;
  for (double x : {0.3, 1.3, 4.0}) {
    const ModalSpectrum sx = pot.spectrum_at(x);
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t k = 0; k < s.bins(); ++k) {
        const double mag = std::abs(s(l, k));
        if (mag < 1e-12 * std::sqrt(s.energy())) continue;
        const double expect = std::exp(pot.root(l, k).p() * x);
        if (expect < 1e-200) continue;
        damp = std::max(damp, std::abs(std::abs(sx(l, k)) / mag - expect) / expect);
      }
  }
  c.le("damping_rel_err", damp, 1e-12);

  double prev = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int r = 0; r < 3; ++r) {
    const double dx = 0.1 / std::pow(2.0, r);
    const auto n = static_cast<std::size_t>(std::llround(1.0 / dx)) + 1;
    const JResidual res = residual_J(s, 0.5, dx, n, basis, 0.3);
    if (r > 0) {
      lo = std::min(lo, prev / res.absolute);
      hi = std::max(hi, prev / res.absolute);
    }
    prev = res.absolute;
  }
  say(log, "band-limited modal mu on a 801-sample window, residual at dx = 0.1, 0.05, 0.025");
  c.in("residual_ratio_min", lo, 3.2, 4.8);
  c.in("residual_ratio_max", hi, 3.2, 4.8);
}

void semigroup_suite(Checks& c, std::ostream* log) {
  const EigenBasis basis = build_basis(BoundaryCase::DirichletDirichlet, pi, 3);
  const StripGrid g(0.05, 40.0, 40.0);
  StripField u0(g, 3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (std::size_t l = 0; l < 3; ++l) {
    const double a = coef(rng);
    for (std::size_t j = 0; j < g.size(); ++j) u0.values(l, j) = a * std::exp(-std::pow((g.x(j) - 1.0) / 1.2, 2));
  }
  const double b = 0.5;
  const double n0 = u0.norm();
  double norm_err = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.5 * k;
    norm_err = std::max(norm_err, std::abs(eval_S(u0, t, b, basis).norm() - n0) / n0);
  }
  c.le("norm_drift(t<=10)", norm_err, 1e-12);

  double group = 0.0;
  for (auto [s1, s2] : {std::pair{0.4, 0.9}, std::pair{2.5, 7.5}}) {
    // The evolved field has wrapped around the periodic strip, so the edge guard is off.
    const StripField a = eval_S(eval_S(u0, s1, b, basis), s2, b, basis, std::numeric_limits<double>::infinity());
    const StripField ab = eval_S(u0, s1 + s2, b, basis);
    group = std::max(group, (a.values - ab.values).max_abs() / u0.values.max_abs());
  }
  c.le("group_defect", group, 1e-12);

  // Constant-in-time f: K(t) = t f + t^2/2 A f + O(t^3).
  const StripGrid gk(0.1, 40.0, 40.0);
  StripField f(gk, 2);
  for (std::size_t j = 0; j < gk.size(); ++j) {
    f.values(0, j) = std::exp(-std::pow(gk.x(j) / 8.0, 2));
    f.values(1, j) = 0.5 * f.values(0, j);
  }
  const double t = 1e-3;
  const std::vector<StripField> fs(5, f);
  const StripField k = eval_K(fs, t / 4, 0.2, basis);
  const StripField af = apply_generator(f, 0.2, basis);
  Field taylor = t * f.values + (0.5 * t * t) * af.values;
  say(log, "strip dx = 0.05 on [-40, 40]; K Taylor check at t = 1e-3 with 4 steps");
  c.le("K_taylor_rel", rel_l2(k.values, taylor, 0), 1e-6);
}

// ---------------------------------------------------------------------------

struct Setup {
  SolverConfig cfg;
  EigenBasis basis;
  XGrid grid;
};

Setup setup(const SolverConfig& cfg) {
  return Setup{cfg, build_basis(cfg.boundary_case, cfg.L, cfg.l_max), XGrid(cfg.N_x, cfg.X_max)};
}

void linear_cross_oracle(Checks& c, std::ostream* log) {
  SolverConfig cfg;
  cfg.boundary_case = BoundaryCase::DirichletDirichlet;
  cfg.L = pi;
  cfg.b = 0.0;
  cfg.X_max = 25.0;
  cfg.N_x = 512;
  cfg.l_max = 32;
  cfg.T = 1.0;
  cfg.dt = 1e-3;
  cfg.nonlinearity = Nonlinearity::Off;
  const Setup s = setup(cfg);

  InitialSpec is;
  is.kind = InitialKind::Gaussian;
  is.amplitude = 0.5;
  is.x0 = 6.0;
  is.width = 1.0;
  is.modes = {{0, 1.0}, {2, 0.5}};
  BoundarySpec bs{BoundaryKind::Sine, 0.2, 3.0, 0.3, 0};
  ForcingSpec fs{ForcingKind::Gaussian, 0.3, 5.0, 1.0, 0.3, 2.0, 1};
  ProblemData d;
  d.u0 = make_initial(is, s.basis, s.grid);
  d.boundary = make_boundary(bs, cfg.l_max);
  d.forcing = make_forcing(fs, s.grid);
  const RunResult run = ZkSolver(cfg, d).run();

  SuperpositionInput in;
  in.basis = &s.basis;
  in.grid = s.grid;
  in.b = cfg.b;
  in.times = TimeGrid{cfg.steps() + 1, cfg.dt};
  in.x_ext = 150.0;
  in.time_pad = 20.0;
  in.u0 = d.u0;
  in.forcing = [&](double t) {
    Field f(cfg.l_max, cfg.N_x);
    d.forcing(t, f);
    return f;
  };
  in.mu = [&](double t) {
    std::vector<double> m(cfg.l_max);
    d.boundary(t, m);
    return m;
  };
  in.output_steps = {cfg.steps()};
  const SuperpositionResult oracle = solve_linear_superposition(in);

  say(log, "case a, L = pi, b = 0, N_x = 512, l_max = 32, T = 1; u0, mu and f all nonzero");
  c.le("rel_L2(x>=2dx)", rel_l2(run.final_state, oracle.fields[0], 2), 1e-2);
  std::ostringstream extra;
  extra.precision(3);
  extra << "rel_L2(all x)=" << rel_l2(run.final_state, oracle.fields[0], 0) << " right_leak=" << run.right_leak;
  c.note(extra.str());
}

struct ConservationRun {
  ConservationResiduals res;
  double seconds = 0.0;
};

ConservationRun conservation_run(std::size_t n_x) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.boundary_case = BoundaryCase::DirichletDirichlet;
  cfg.L = pi;
  cfg.X_max = 40.0;
  cfg.N_x = n_x;
  cfg.l_max = 32;
  cfg.T = 5.0;
  cfg.dt = 1e-3;
  const Setup s = setup(cfg);
  InitialSpec is;
  is.kind = InitialKind::Gaussian;
  is.norm = 0.1;
  is.x0 = 7.0;
  is.width = 1.5;
  is.modes = {{0, 1.0}, {1, 0.5}};
  ProblemData d;
  d.u0 = make_initial(is, s.basis, s.grid);
  const RunResult r = ZkSolver(cfg, d).run();
  if (r.blew_up) throw BlowUpError(r.blow_up_time, r.message);
  ConservationRun out;
  out.res = conservation_residuals(r.series, d.homogeneous());
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void conservation(Checks& c, std::ostream* log) {
  const ConservationRun coarse = conservation_run(256);
  const ConservationRun fine = conservation_run(512);
  say(log, "case a, ||u0|| = 0.1, mu = f = 0, T = 5, l_max = 32, N_x = 256 and 512");
  c.le("mass_residual(512)", fine.res.mass, 1e-3);
  c.le("energy_residual(512)", fine.res.energy, 5e-3);
  c.le("mass_residual_ratio(512/256)", fine.res.mass / coarse.res.mass, 1.0);
  c.le("energy_residual_ratio(512/256)", fine.res.energy / coarse.res.energy, 1.0);
}

void decay_case(Checks& c, std::ostream* log, BoundaryCase bc, const std::string& tag) {
  const double u0_norm = 0.005;
  const DecayThresholds th = decay_thresholds(0.0, pi, bc);
  const double alpha = 0.5 * th.alpha0;
  SolverConfig cfg;
  cfg.boundary_case = bc;
  cfg.L = pi;
  cfg.X_max = 40.0;
  cfg.N_x = 256;
  cfg.l_max = 16;
  cfg.T = 20.0;
  cfg.dt = 2e-3;
  cfg.series_every = 5;
  cfg.weight = Weight(WeightKind::Exponential, alpha);
  cfg.record_weighted_terms = true;
  const Setup s = setup(cfg);
  InitialSpec is;
  is.kind = InitialKind::Gaussian;
  is.norm = u0_norm;
  is.x0 = 7.0;
  is.width = 1.5;
  is.modes = {{0, 1.0}, {1, 0.5}};
  ProblemData d;
  d.u0 = make_initial(is, s.basis, s.grid);
  const RunResult r = ZkSolver(cfg, d).run();
  if (r.blew_up) throw BlowUpError(r.blow_up_time, r.message);

  const double c_fit = fit_cubic_constant(r.weighted_terms, u0_norm, false);
  const double eps0 = eps0_bound(th.c0, c_fit, cfg.L);
  const double ab = alpha * th.beta;
  const DecayFit fit = fit_decay(r.series.weighted_norm, r.series.t, ab, 0.01);
  std::ostringstream o;
  o.precision(4);
  o << tag << ": alpha=" << alpha << " beta=" << th.beta << " c_fit=" << c_fit << " eps0=" << eps0;
  say(log, o.str());
  c.le(tag + ".||u0||/eps0", u0_norm / eps0, 1.0);
  c.le(tag + ".worst_increase", fit.worst_increase, 0.01);
  c.ge(tag + ".rate/(alpha*beta)", fit.rate / ab, 1.0);
}

void decay(Checks& c, std::ostream* log) {
  decay_case(c, log, BoundaryCase::DirichletDirichlet, "a");
  decay_case(c, log, BoundaryCase::DirichletNeumann, "c");
}

void continuous_dependence(Checks& c, std::ostream* log) {
  SolverConfig cfg;
  cfg.boundary_case = BoundaryCase::DirichletDirichlet;
  cfg.L = pi;
  cfg.X_max = 40.0;
  cfg.N_x = 256;
  cfg.l_max = 16;
  cfg.T = 5.0;
  cfg.dt = 2e-3;
  const Setup s = setup(cfg);
  InitialSpec base;
  base.kind = InitialKind::Gaussian;
  base.norm = 0.05;
  base.x0 = 7.0;
  base.width = 1.5;
  base.modes = {{0, 1.0}, {1, 0.5}};
  InitialSpec pert;
  pert.kind = InitialKind::Random;
  pert.norm = 1.0;
  pert.x0 = 9.0;
  pert.width = 1.0;
  pert.random_modes = 6;
  pert.seed = 11;
  const Field u0 = make_initial(base, s.basis, s.grid);
  const Field v = make_initial(pert, s.basis, s.grid);

  ProblemData d;
  d.u0 = u0;
  const RunResult ref = ZkSolver(cfg, d).run();
  double dist[2];
  const double deltas[2] = {1e-3, 1e-4};
  for (int k = 0; k < 2; ++k) {
    ProblemData dk;
    dk.u0 = u0;
    dk.u0.axpy(deltas[k], v);
    const RunResult rk = ZkSolver(cfg, dk).run();
    dist[k] = field_distance(rk.final_state, ref.final_state, s.grid);
  }
  std::ostringstream o;
  o.precision(4);
  o << "||u(T)-v(T)|| = " << dist[0] << " (delta 1e-3), " << dist[1] << " (delta 1e-4)";
  say(log, o.str());
  c.in("distance_ratio/delta_ratio", (dist[0] / dist[1]) / 10.0, 0.5, 2.0);
}

double physical_sup(const Field& u, const SolverConfig& cfg) {
  const EigenBasis fine = build_basis(cfg.boundary_case, cfg.L, cfg.l_max, 4 * cfg.l_max);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      u.data().data(), static_cast<Eigen::Index>(u.modes()), static_cast<Eigen::Index>(u.points()));
  return (fine.synthesis_matrix() * m).cwiseAbs().maxCoeff();
}

void regularization(Checks& c, std::ostream* log) {
  SolverConfig cfg;
  cfg.boundary_case = BoundaryCase::DirichletDirichlet;
  cfg.L = pi;
  cfg.X_max = 40.0;
  cfg.N_x = 256;
  cfg.l_max = 16;
  cfg.T = 2.0;
  cfg.dt = 2e-3;
  cfg.snapshot_every = 10;
  const Setup s = setup(cfg);
  InitialSpec is;
  is.kind = InitialKind::Gaussian;
  is.amplitude = 1.0;
  is.x0 = 7.0;
  is.width = 1.5;
  ProblemData d;
  d.u0 = make_initial(is, s.basis, s.grid);
  const RunResult full = ZkSolver(cfg, d).run();
  double sup = 0.0;
  for (const Snapshot& snap : full.snapshots) sup = std::max(sup, physical_sup(snap.u, cfg));

  cfg.nonlinearity = Nonlinearity::Saturated;
  cfg.snapshot_every = 0;
  double prev = std::numeric_limits<double>::infinity();
  double worst_inside = 0.0;
  bool monotone = true;
  std::ostringstream o;
  o.precision(3);
  o << "sup|u| = " << sup << "; gaps:";
  for (double h : {1.0, 0.5, 0.25, 0.1, 0.05}) {
    cfg.h = h;
    const RunResult sat = ZkSolver(cfg, d).run();
    const double gap = field_distance(sat.final_state, full.final_state, s.grid);
    o << " h=" << h << ":" << gap;
    if (1.0 / h > 4.0 * sup) worst_inside = std::max(worst_inside, gap);
    monotone = monotone && gap <= prev * (1.0 + 1e-12);
    prev = gap;
  }
  say(log, o.str());
  c.le("gap(1/h>4sup)", worst_inside, 1e-6);
  c.flag("gap_non_increasing_in_h", monotone);
}

struct Spec {
  const char* title;
  double limit;
  std::function<void(Checks&, std::ostream*)> body;
};

const Spec kSpecs[kCriterionCount] = {
    {"eigenbasis suite", 5.0, eigenbasis_suite},
    {"Cardano suite", 10.0, cardano_suite},
    {"boundary potential", 30.0, potential_suite},
    {"semigroup", 10.0, semigroup_suite},
    {"linear cross-oracle", 120.0, linear_cross_oracle},
    {"conservation", 180.0, conservation},
    {"decay", 300.0, decay},
    {"continuous dependence", 300.0, continuous_dependence},
    {"regularization consistency", 300.0, regularization},
};

}  // namespace

CriterionResult run_criterion(int id, std::ostream* log) {
  if (id < 1 || id > kCriterionCount) throw ConfigError("criterion id must be in 1.." + std::to_string(kCriterionCount));
  const Spec& spec = kSpecs[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = spec.title;
  r.limit_seconds = spec.limit;
  if (log) *log << "C" << id << " " << spec.title << std::endl;
  Checks checks;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    spec.body(checks, log);
  } catch (const std::exception& e) {
    checks.flag(std::string("exception: ") + e.what(), false);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.detail = checks.text();
  r.pass = checks.ok() && r.seconds <= r.limit_seconds;
  return r;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s.precision(3);
  s << (r.pass ? "[PASS] " : "[FAIL] ") << "C" << r.id << " " << r.title << ": " << r.detail
    << "; runtime_s=" << r.seconds << " (<= " << r.limit_seconds << ")"
    << (r.seconds <= r.limit_seconds ? "" : " FAIL");
  return s.str();
}

}  // namespace zk
