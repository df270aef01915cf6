#include "zk/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "zk/error.hpp"
#include "zk/parallel.hpp"
#include "zk/quadrature.hpp"
#include "zk/regularization.hpp"
#include "zk/x_operators.hpp"

namespace zk {

Nonlinearity parse_nonlinearity(std::string_view text) {
  if (text == "full") return Nonlinearity::Full;
  if (text == "saturated") return Nonlinearity::Saturated;
  if (text == "off" || text == "none") return Nonlinearity::Off;
  throw ConfigError("unknown nonlinearity '" + std::string(text) + "'");
}

std::string_view nonlinearity_name(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::Full: return "full";
    case Nonlinearity::Saturated: return "saturated";
    case Nonlinearity::Off: return "off";
  }
  return "?";
}

TimeScheme parse_time_scheme(std::string_view text) {
  if (text == "imex") return TimeScheme::Imex;
  if (text == "rk4") return TimeScheme::ExplicitRK4;
  throw ConfigError("unknown time scheme '" + std::string(text) + "'");
}

std::string_view time_scheme_name(TimeScheme s) {
  return s == TimeScheme::Imex ? "imex" : "rk4";
}

namespace {

// Bounds for the fourth-order operators with this closure (per unit dx^3 and dx).
constexpr double kD3Radius = 4.6087;
constexpr double kD1Radius = 1.3722;
constexpr double kRk4Limit = 2.8;

double spectral_radius(const SolverConfig& c, double lambda_max) {
  const double dx = c.X_max / static_cast<double>(c.N_x - 1);
  const double a = std::max(std::abs(lambda_max - c.b), std::abs(c.b));
  return kD3Radius / (dx * dx * dx) + a * kD1Radius / dx;
}

double largest_eigenvalue(const SolverConfig& c) {
  return build_basis(c.boundary_case, c.L, c.l_max).eigenvalue(c.l_max - 1);
}

// ARS(4,4,3): stiffly accurate implicit and explicit tableaux, gamma = 1/2.
constexpr double kGamma = 0.5;
constexpr std::array<double, 5> kC{0.0, 0.5, 2.0 / 3.0, 0.5, 1.0};
constexpr double kAI[5][5] = {{0, 0, 0, 0, 0},
                              {0, 0.5, 0, 0, 0},
                              {0, 1.0 / 6.0, 0.5, 0, 0},
                              {0, -0.5, 0.5, 0.5, 0},
                              {0, 1.5, -1.5, 0.5, 0.5}};
constexpr double kAE[5][5] = {{0, 0, 0, 0, 0},
                              {0.5, 0, 0, 0, 0},
                              {11.0 / 18.0, 1.0 / 18.0, 0, 0, 0},
                              {5.0 / 6.0, -5.0 / 6.0, 0.5, 0, 0},
                              {0.25, 1.75, 0.75, -1.75, 0}};

}  // namespace

std::size_t SolverConfig::steps() const {
  return static_cast<std::size_t>(std::llround(T / dt));
}

void SolverConfig::validate() const {
  if (!(L > 0.0)) throw ConfigError("solver.L must be positive");
  if (!(X_max > 0.0)) throw ConfigError("solver.X_max must be positive");
  if (N_x < 16) throw ConfigError("solver.N_x must be at least 16");
  if (l_max < 1) throw ConfigError("solver.l_max must be at least 1");
  if (!(T >= 0.0)) throw ConfigError("solver.T must be non-negative");
  if (!(dt > 0.0)) throw ConfigError("solver.dt must be positive");
  if (T > 0.0 && std::abs(static_cast<double>(steps()) * dt - T) > 1e-9 * T) {
    throw ConfigError("solver.T must be a whole number of steps solver.dt");
  }
  if (nonlinearity == Nonlinearity::Saturated || truncate) {
    if (!(h > 0.0 && h <= 1.0)) throw ConfigError("solver.h must lie in (0, 1]");
  }
  if (series_every < 1) throw ConfigError("solver.series_every must be at least 1");
  if (scheme == TimeScheme::ExplicitRK4) {
    const double rho = spectral_radius(*this, largest_eigenvalue(*this));
    if (dt * rho > kRk4Limit) {
      throw ConfigError("solver.dt violates the explicit stability bound (dt <= " +
                        std::to_string(kRk4Limit / rho) + ")");
    }
  }
}

struct ZkSolver::Impl {
  using Sparse = Eigen::SparseMatrix<double>;
  using Lu = Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>>;

  EigenBasis basis;
  XGrid grid;
  XOperators ops;
  FieldMeasure measure;
  std::vector<Sparse> a_int;         // per mode, interior x interior
  std::vector<Eigen::VectorXd> a_bc;  // per mode, column of u_0
  Eigen::MatrixXd synth;              // product nodes x modes
  Eigen::MatrixXd analysis;           // modes x product nodes
  std::vector<double> trunc;          // eta(1/h - x_i) or empty
  mutable std::map<double, std::vector<std::unique_ptr<Lu>>> lu_cache;

  Impl(const SolverConfig& c)
      : basis(build_basis(c.boundary_case, c.L, c.l_max)),
        grid(c.N_x, c.X_max),
        ops(grid),
        measure(basis, grid, c.b, c.weight) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const Sparse d1 = ops.d1();
    const Sparse d3 = ops.d3();
    const Sparse d1i = d1.middleCols(1, n - 2);
    const Sparse d3i = d3.middleCols(1, n - 2);
    const Eigen::VectorXd d1b = Eigen::MatrixXd(d1.col(0)).col(0);
    const Eigen::VectorXd d3b = Eigen::MatrixXd(d3.col(0)).col(0);
    for (std::size_t l = 0; l < basis.size(); ++l) {
      const double s = basis.eigenvalue(l) - c.b;
      Sparse a = s * d1i - d3i;
      a.makeCompressed();
      a_int.push_back(std::move(a));
      a_bc.push_back(s * d1b - d3b);
    }
    build_product_quadrature(c);
    if (c.truncate) {
      trunc.resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) trunc[i] = cutoff_eta(1.0 / c.h - grid.x(i));
    }
  }

  // Nodes for the physical-space product. Cosine and Fourier modes are closed
  // under products, so a 3/2-padded uniform grid projects exactly; sine and
  // quarter-wave products are not, so cases a and c use Gauss-Legendre nodes.
  void build_product_quadrature(const SolverConfig& c) {
    const bool closed = c.boundary_case == BoundaryCase::NeumannNeumann ||
                        c.boundary_case == BoundaryCase::Periodic;
    if (!c.dealias || closed) {
      // Cubic products reach three times the top wavenumber.
      std::size_t nodes = 0;
      if (c.dealias)
        nodes = c.boundary_case == BoundaryCase::Periodic ? 2 * ((3 * (c.l_max / 2) + 1) / 2) + 1
                                                          : minimal_node_count(c.boundary_case, (3 * c.l_max + 1) / 2);
      const EigenBasis padded = build_basis(c.boundary_case, c.L, c.l_max, nodes);
      synth = padded.synthesis_matrix();
      analysis = padded.analysis_matrix();
      return;
    }
    const QuadratureRule gl = gauss_legendre(3 * c.l_max + 16, 0.0, c.L);
    const auto n = static_cast<Eigen::Index>(gl.nodes.size());
    const auto m = static_cast<Eigen::Index>(c.l_max);
    synth.resize(n, m);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < m; ++l)
        synth(j, l) = basis.evaluate(static_cast<std::size_t>(l), gl.nodes[static_cast<std::size_t>(j)]);
    analysis = (Eigen::Map<const Eigen::VectorXd>(gl.weights.data(), n).asDiagonal() * synth).transpose();
  }

  const std::vector<std::unique_ptr<Lu>>& factors(double dt) const {
    auto it = lu_cache.find(dt);
    if (it != lu_cache.end()) return it->second;
    std::vector<std::unique_ptr<Lu>> f(a_int.size());
    const auto n = a_int.front().rows();
    parallel_for(a_int.size(), [&](std::size_t l) {
      Sparse id(n, n);
      id.setIdentity();
      Sparse m = id - (kGamma * dt) * a_int[l];
      m.makeCompressed();
      auto lu = std::make_unique<Lu>();
      lu->compute(m);
      if (lu->info() != Eigen::Success) throw Error("implicit operator factorization failed");
      f[l] = std::move(lu);
    });
    if (lu_cache.size() > 4) lu_cache.clear();
    return lu_cache.emplace(dt, std::move(f)).first->second;
  }
};

ZkSolver::ZkSolver(SolverConfig cfg, ProblemData data) : cfg_(std::move(cfg)), data_(std::move(data)) {
  cfg_.validate();
  impl_ = std::make_unique<Impl>(cfg_);
  if (data_.u0.modes() == 0 && data_.u0.points() == 0) data_.u0 = Field(cfg_.l_max, cfg_.N_x);
  if (data_.u0.modes() != cfg_.l_max || data_.u0.points() != cfg_.N_x) {
    throw ShapeError("initial data must be l_max x N_x");
  }
}

ZkSolver::~ZkSolver() = default;
ZkSolver::ZkSolver(ZkSolver&&) noexcept = default;
ZkSolver& ZkSolver::operator=(ZkSolver&&) noexcept = default;

const EigenBasis& ZkSolver::basis() const noexcept { return impl_->basis; }
const XGrid& ZkSolver::grid() const noexcept { return impl_->grid; }
const FieldMeasure& ZkSolver::measure() const noexcept { return impl_->measure; }

double ZkSolver::linear_spectral_radius() const {
  return spectral_radius(cfg_, impl_->basis.eigenvalue(cfg_.l_max - 1));
}

namespace {

void impose(Field& u, const ProblemData& d, double t, std::vector<double>& mu) {
  const std::size_t last = u.points() - 1;
  if (d.boundary) {
    mu.assign(u.modes(), 0.0);
    d.boundary(t, mu);
    for (std::size_t l = 0; l < u.modes(); ++l) u(l, 0) = mu[l];
  } else {
    for (std::size_t l = 0; l < u.modes(); ++l) u(l, 0) = 0.0;
  }
  for (std::size_t l = 0; l < u.modes(); ++l) u(l, last) = 0.0;
}

double boundary_value(const std::vector<double>& mu, std::size_t l, bool present) {
  return present ? mu[l] : 0.0;
}

}  // namespace

Field ZkSolver::nonlinear(const Field& u) const {
  Field out(u.modes(), u.points());
  if (cfg_.nonlinearity == Nonlinearity::Off) return out;
  const auto m = static_cast<Eigen::Index>(u.modes());
  const auto n = static_cast<Eigen::Index>(u.points());
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Field ux(u.modes(), u.points());
  for (std::size_t l = 0; l < u.modes(); ++l) impl_->ops.gradient(u.mode(l), ux.mode(l));
  Eigen::Map<const RowMat> U(u.data().data(), m, n);
  Eigen::Map<const RowMat> UX(ux.data().data(), m, n);
  Eigen::MatrixXd p = impl_->synth * U;
  const Eigen::MatrixXd px = impl_->synth * UX;
  if (cfg_.nonlinearity == Nonlinearity::Saturated) {
    p = p.unaryExpr([h = cfg_.h](double v) { return g_h(v, h).derivative; });
  }
  p.array() *= px.array();
  Eigen::Map<RowMat> O(out.data().data(), m, n);
  O.noalias() = impl_->analysis * p;
  return out;
}

Field ZkSolver::rhs(const Field& u_in, double t) const {
  Field u = u_in;
  std::vector<double> mu;
  impose(u, data_, t, mu);
  Field out = nonlinear(u);
  out *= -1.0;
  if (data_.forcing) {
    Field f(u.modes(), u.points());
    data_.forcing(t, f);
    if (!impl_->trunc.empty()) {
      for (std::size_t l = 0; l < f.modes(); ++l)
        for (std::size_t i = 0; i < f.points(); ++i) f(l, i) *= impl_->trunc[i];
    }
    out += f;
  }
  const auto n = static_cast<Eigen::Index>(u.points());
  for (std::size_t l = 0; l < u.modes(); ++l) {
    Eigen::Map<const Eigen::VectorXd> ul(u.mode(l).data(), n);
    Eigen::Map<Eigen::VectorXd> ol(out.mode(l).data(), n);
    ol.segment(1, n - 2) += impl_->a_int[l] * ul.segment(1, n - 2) + impl_->a_bc[l] * ul(0);
    ol(0) = 0.0;
    ol(n - 1) = 0.0;
  }
  return out;
}

Field ZkSolver::initial_state() const {
  Field u = data_.u0;
  if (!impl_->trunc.empty()) {
    for (std::size_t l = 0; l < u.modes(); ++l)
      for (std::size_t i = 0; i < u.points(); ++i) u(l, i) *= impl_->trunc[i];
  }
  std::vector<double> mu;
  impose(u, data_, 0.0, mu);
  return u;
}

void ZkSolver::step(Field& u, double t, double dt) const {
  std::vector<double> mu;
  if (cfg_.scheme == TimeScheme::ExplicitRK4) {
    const Field k1 = rhs(u, t);
    const Field k2 = rhs(u + (0.5 * dt) * k1, t + 0.5 * dt);
    const Field k3 = rhs(u + (0.5 * dt) * k2, t + 0.5 * dt);
    const Field k4 = rhs(u + dt * k3, t + dt);
    u.axpy(dt / 6.0, k1);
    u.axpy(dt / 3.0, k2);
    u.axpy(dt / 3.0, k3);
    u.axpy(dt / 6.0, k4);
    impose(u, data_, t + dt, mu);
  } else {
    const auto& lu = impl_->factors(dt);
    const std::size_t modes = u.modes();
    const auto n = static_cast<Eigen::Index>(u.points());
    const auto ni = n - 2;
    impose(u, data_, t, mu);
    // Explicit part: -N(Y) + f; implicit part: A Y + a mu.
    auto explicit_part = [&](const Field& y, double ts) {
      Field k = nonlinear(y);
      k *= -1.0;
      if (data_.forcing) {
        Field f(modes, u.points());
        data_.forcing(ts, f);
        if (!impl_->trunc.empty()) {
          for (std::size_t l = 0; l < modes; ++l)
            for (std::size_t i = 0; i < f.points(); ++i) f(l, i) *= impl_->trunc[i];
        }
        k += f;
      }
      return k;
    };
    std::array<Field, 5> ke;
    std::array<Field, 5> ki;
    ke[0] = explicit_part(u, t);
    Field y = u;
    for (int s = 1; s < 5; ++s) {
      const double ts = t + kC[static_cast<std::size_t>(s)] * dt;
      Field r = u;
      for (int j = 0; j < s; ++j) {
        if (kAE[s][j] != 0.0) r.axpy(dt * kAE[s][j], ke[static_cast<std::size_t>(j)]);
        if (j > 0 && kAI[s][j] != 0.0) r.axpy(dt * kAI[s][j], ki[static_cast<std::size_t>(j)]);
      }
      std::vector<double> mus;
      const bool has_mu = static_cast<bool>(data_.boundary);
      if (has_mu) {
        mus.assign(modes, 0.0);
        data_.boundary(ts, mus);
      }
      y = r;
      Field k(modes, u.points());
      const double gdt = kGamma * dt;
      parallel_for(modes, [&](std::size_t l) {
        Eigen::Map<const Eigen::VectorXd> rl(r.mode(l).data(), n);
        Eigen::VectorXd b = rl.segment(1, ni);
        b += gdt * boundary_value(mus, l, has_mu) * impl_->a_bc[l];
        const Eigen::VectorXd sol = lu[l]->solve(b);
        Eigen::Map<Eigen::VectorXd> yl(y.mode(l).data(), n);
        Eigen::Map<Eigen::VectorXd> kl(k.mode(l).data(), n);
        yl.segment(1, ni) = sol;
        kl.segment(1, ni) = (sol - rl.segment(1, ni)) / gdt;
        yl(0) = boundary_value(mus, l, has_mu);
        yl(n - 1) = 0.0;
      });
      ki[static_cast<std::size_t>(s)] = std::move(k);
      if (s < 4) ke[static_cast<std::size_t>(s)] = explicit_part(y, ts);
    }
    u = std::move(y);
  }
  if (!u.all_finite()) throw BlowUpError(t + dt, "non-finite values in the solution");
}

RunResult ZkSolver::run() const {
  RunResult res;
  Field u = initial_state();
  const std::size_t steps = cfg_.steps();
  const FieldMeasure& meas = impl_->measure;
  auto record = [&](std::size_t n, double t) {
    const bool series_now = (n % cfg_.series_every == 0) || n == steps;
    if (series_now) {
      const MassEnergy me = meas.mass_energy(u);
      res.series.t.push_back(t);
      res.series.mass.push_back(me.mass);
      res.series.energy.push_back(me.energy);
      res.series.weighted_norm.push_back(meas.weighted(u));
      res.series.boundary_flux.push_back(meas.flux(u));
      res.series.energy_flux.push_back(meas.energy_flux(u));
      if (cfg_.record_profiles) {
        std::vector<double> mp(u.points());
        std::vector<double> gp(u.points());
        meas.profiles(u, mp, gp);
        res.profiles.t.push_back(t);
        res.profiles.mass.push_back(std::move(mp));
        res.profiles.grad.push_back(std::move(gp));
      }
      if (cfg_.record_weighted_terms) res.weighted_terms.push_back(meas.weighted_terms(u));
      res.right_leak = std::max(res.right_leak, meas.right_edge_ratio(u));
    }
    if (cfg_.snapshot_every > 0 && (n % cfg_.snapshot_every == 0 || n == steps)) {
      res.snapshots.push_back(Snapshot{t, u});
    }
  };
  record(0, 0.0);
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      step(u, t, cfg_.dt);
    } catch (const BlowUpError& e) {
      res.blew_up = true;
      res.blow_up_time = e.time();
      res.message = e.what();
      break;
    }
    t = static_cast<double>(n) * cfg_.dt;
    res.steps = n;
    record(n, t);
  }
  res.final_state = std::move(u);
  res.final_time = t;
  res.leak_ok = res.right_leak <= cfg_.leak_tolerance;
  return res;
}

}  // namespace zk
