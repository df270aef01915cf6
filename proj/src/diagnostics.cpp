#include "zk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zk/error.hpp"
#include "zk/quadrature.hpp"

namespace zk {

FieldMeasure::FieldMeasure(const EigenBasis& basis, const XGrid& grid, double b, Weight weight)
    : basis_(&basis), grid_(grid), ops_(grid), b_(b), weight_(weight),
      qx_(uniform_weights(grid.size(), grid.dx())), rho_(grid.size()) {
  for (std::size_t i = 0; i < grid.size(); ++i) rho_[i] = weight_(grid.x(i));
  const std::size_t ng = 3 * basis.size() + 16;
  const QuadratureRule gl = gauss_legendre(ng, 0.0, basis.width());
  gl_synth_.resize(static_cast<Eigen::Index>(ng), static_cast<Eigen::Index>(basis.size()));
  gl_w_.resize(static_cast<Eigen::Index>(ng));
  for (std::size_t j = 0; j < ng; ++j) {
    gl_w_(static_cast<Eigen::Index>(j)) = gl.weights[j];
    for (std::size_t l = 0; l < basis.size(); ++l) {
      gl_synth_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = basis.evaluate(l, gl.nodes[j]);
    }
  }
}

Field FieldMeasure::gradient(const Field& u) const {
  Field g(u.modes(), u.points());
  for (std::size_t l = 0; l < u.modes(); ++l) ops_.gradient(u.mode(l), g.mode(l));
  return g;
}

double FieldMeasure::cubic(const Field& u, bool weighted) const {
  const auto m = static_cast<Eigen::Index>(u.modes());
  const auto n = static_cast<Eigen::Index>(u.points());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> U(u.data().data(), m, n);
  const Eigen::MatrixXd phys = gl_synth_.leftCols(m) * U;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double col = gl_w_.dot(phys.col(i).array().cube().matrix());
    s += qx_[static_cast<std::size_t>(i)] * (weighted ? rho_[static_cast<std::size_t>(i)] : 1.0) * col;
  }
  return s;
}

double FieldMeasure::mass(const Field& u) const {
  if (u.points() != grid_.size()) throw ShapeError("mass: field/grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.points(); ++i) {
    double col = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) col += u(l, i) * u(l, i);
    s += qx_[i] * col;
  }
  return s;
}

MassEnergy FieldMeasure::mass_energy(const Field& u) const {
  if (u.points() != grid_.size()) throw ShapeError("mass_energy: field/grid mismatch");
  if (u.modes() > basis_->size()) throw ShapeError("mass_energy: more modes than the basis");
  const Field g = gradient(u);
  MassEnergy r;
  double quad = 0.0;
  for (std::size_t i = 0; i < u.points(); ++i) {
    double m = 0.0;
    double e = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) {
      m += u(l, i) * u(l, i);
      e += g(l, i) * g(l, i) + basis_->eigenvalue(l) * u(l, i) * u(l, i);
    }
    r.mass += qx_[i] * m;
    quad += qx_[i] * e;
  }
  r.energy = quad - cubic(u, false) / 3.0;
  return r;
}

double FieldMeasure::weighted(const Field& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < u.points(); ++i) {
    double col = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) col += u(l, i) * u(l, i);
    s += qx_[i] * rho_[i] * col;
  }
  return s;
}

WeightedTerms FieldMeasure::weighted_terms(const Field& u) const {
  const Field g = gradient(u);
  WeightedTerms w;
  for (std::size_t i = 0; i < u.points(); ++i) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) {
      a += u(l, i) * u(l, i);
      d += g(l, i) * g(l, i) + basis_->eigenvalue(l) * u(l, i) * u(l, i);
    }
    w.u2 += qx_[i] * rho_[i] * a;
    w.grad2 += qx_[i] * rho_[i] * d;
  }
  w.u3 = cubic(u, true);
  return w;
}

double FieldMeasure::flux(const Field& u) const {
  double s = 0.0;
  for (std::size_t l = 0; l < u.modes(); ++l) {
    const double d = ops_.trace_dx(u.mode(l));
    s += d * d;
  }
  return s;
}

double FieldMeasure::energy_flux(const Field& u) const {
  double s = 0.0;
  for (std::size_t l = 0; l < u.modes(); ++l) {
    const double d1 = ops_.trace_dx(u.mode(l));
    const double d2 = ops_.trace_dxx(u.mode(l));
    s += d2 * d2 + b_ * d1 * d1;
  }
  return s;
}

void FieldMeasure::profiles(const Field& u, std::span<double> mass_profile,
                            std::span<double> grad_profile) const {
  if (mass_profile.size() != u.points() || grad_profile.size() != u.points()) {
    throw ShapeError("profiles: size mismatch");
  }
  const Field g = gradient(u);
  for (std::size_t i = 0; i < u.points(); ++i) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) {
      a += u(l, i) * u(l, i);
      d += g(l, i) * g(l, i) + basis_->eigenvalue(l) * u(l, i) * u(l, i);
    }
    mass_profile[i] = a;
    grad_profile[i] = d;
  }
}

double FieldMeasure::right_edge_ratio(const Field& u) const {
  const std::size_t n = u.points();
  const std::size_t start = n - std::max<std::size_t>(1, n / 20);
  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double col = 0.0;
    for (std::size_t l = 0; l < u.modes(); ++l) col += u(l, i) * u(l, i);
    peak = std::max(peak, col);
    if (i >= start) edge = std::max(edge, col);
  }
  return peak > 0.0 ? std::sqrt(edge / peak) : 0.0;
}

MassEnergy mass_energy(const Field& u, const EigenBasis& basis, const XGrid& grid) {
  return FieldMeasure(basis, grid).mass_energy(u);
}

namespace {
std::vector<double> trapezoid_time_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t n = 0; n + 1 < t.size(); ++n) {
    const double h = 0.5 * (t[n + 1] - t[n]);
    w[n] += h;
    w[n + 1] += h;
  }
  return w;
}
}  // namespace

double lambda_plus(const Profiles& p, const XGrid& grid) {
  if (grid.x_max() < 1.0) throw ConfigError("lambda_plus needs X_max >= 1");
  const auto width = static_cast<std::size_t>(std::llround(1.0 / grid.dx()));
  const std::vector<double> tw = trapezoid_time_weights(p.t);
  // Sliding window over x of the time-integrated cell sums.
  std::vector<double> cells(grid.size() - 1, 0.0);
  for (std::size_t n = 0; n < p.t.size(); ++n) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      cells[i] += tw[n] * 0.5 * (p.mass[n][i] + p.mass[n][i + 1]) * grid.dx();
    }
  }
  double best = 0.0;
  for (std::size_t i0 = 0; i0 + width < grid.size(); ++i0) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + width; ++i) s += cells[i];
    best = std::max(best, s);
  }
  return best;
}

double local_smoothing(const Profiles& p, const XGrid& grid, double r) {
  if (r < 0.0 || r > grid.x_max() * (1.0 + 1e-12)) throw ConfigError("local_smoothing needs 0 <= r <= X_max");
  const std::vector<double> tw = trapezoid_time_weights(p.t);
  const double pos = r / grid.dx();
  const auto full = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(full);
  double s = 0.0;
  for (std::size_t n = 0; n < p.t.size(); ++n) {
    const auto& g = p.grad[n];
    double col = 0.0;
    for (std::size_t i = 0; i < full && i + 1 < g.size(); ++i) col += 0.5 * (g[i] + g[i + 1]) * grid.dx();
    if (frac > 0.0 && full + 1 < g.size()) {
      const double gr = g[full] + frac * (g[full + 1] - g[full]);
      col += 0.5 * (g[full] + gr) * frac * grid.dx();
    }
    s += tw[n] * col;
  }
  return s;
}

DecayThresholds decay_thresholds(double b, double L, BoundaryCase c, double c_fit) {
  if (c != BoundaryCase::DirichletDirichlet && c != BoundaryCase::DirichletNeumann) {
    throw NotApplicableError("decay thresholds are available for cases a and c only");
  }
  if (!(L > 0.0)) throw ConfigError("decay thresholds need L > 0");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  DecayThresholds d;
  d.c0 = (c == BoundaryCase::DirichletDirichlet) ? pi2 / 2.0 : pi2 / 8.0;
  const double lam1 = steklov_lambda1(build_basis(c, L, 1));
  if (std::abs(d.c0 - 0.5 * L * L * lam1) > 1e-12 * d.c0) {
    throw Error("decay constant c0 disagrees with the first eigenvalue");
  }
  d.L0 = (b > 0.0) ? 0.5 * std::sqrt(d.c0 / b) : std::numeric_limits<double>::infinity();
  d.alpha0 = std::sqrt(d.c0) / (8.0 * L);
  d.beta = d.c0 / (4.0 * L * L);
  d.c_fit = c_fit;
  if (!std::isnan(c_fit)) d.eps0 = eps0_bound(d.c0, c_fit, L);
  return d;
}

double eps0_bound(double c0, double c_fit, double L) {
  if (!(c_fit > 0.0)) return std::numeric_limits<double>::infinity();
  const double rhs = c0 / (8.0 * c_fit * L * L);
  return 0.5 * (std::sqrt(1.0 + 4.0 * rhs) - 1.0);
}

double fit_cubic_constant(std::span<const WeightedTerms> samples, double u0_norm, bool keep_gradient) {
  const double k = u0_norm + u0_norm * u0_norm;
  double c = 0.0;
  for (const WeightedTerms& w : samples) {
    if (!(w.u2 > 0.0) || !(k > 0.0)) continue;
    const double excess = (2.0 / 3.0) * w.u3 - (keep_gradient ? 0.5 * w.grad2 : 0.0);
    if (excess > 0.0) c = std::max(c, excess / (k * w.u2));
  }
  return c;
}

DecayFit fit_decay(std::span<const double> series, std::span<const double> t, double alpha_beta,
                   double tol) {
  if (series.size() != t.size()) throw ShapeError("fit_decay: series/time length mismatch");
  DecayFit fit;
  std::size_t n = 0;
  while (n < series.size() && series[n] > 0.0 && std::isfinite(series[n])) ++n;
  if (n < series.size()) fit.warning = "non-positive entries; fit restricted to the positive prefix";
  fit.used = n;
  if (n >= 2) {
    const std::size_t start = n / 2;
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const auto m = static_cast<double>(n - start);
    for (std::size_t k = start; k < n; ++k) {
      const double y = std::log(series[k]);
      st += t[k];
      sy += y;
      stt += t[k] * t[k];
      sty += t[k] * y;
    }
    const double den = m * stt - st * st;
    fit.rate = den > 0.0 ? -(m * sty - st * sy) / den : 0.0;
  }
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double g = std::exp(alpha_beta * t[k]) * series[k];
    if (std::isfinite(running)) fit.worst_increase = std::max(fit.worst_increase, g / running - 1.0);
    running = std::min(running, g);
  }
  fit.monotone = fit.worst_increase <= tol;
  return fit;
}

ConservationResiduals conservation_residuals(const Series& s, bool homogeneous_data) {
  if (!homogeneous_data) throw NotApplicableError("conservation identities need mu = 0 and f = 0");
  ConservationResiduals r;
  if (s.size() == 0) return r;
  const double m0 = s.mass[0];
  const double e0 = s.energy[0];
  double fm = 0.0;
  double fe = 0.0;
  double worst_m = 0.0;
  double worst_e = 0.0;
  for (std::size_t n = 1; n < s.size(); ++n) {
    const double h = 0.5 * (s.t[n] - s.t[n - 1]);
    fm += h * (s.boundary_flux[n] + s.boundary_flux[n - 1]);
    fe += h * (s.energy_flux[n] + s.energy_flux[n - 1]);
    worst_m = std::max(worst_m, std::abs(s.mass[n] + fm - m0));
    worst_e = std::max(worst_e, std::abs(s.energy[n] + fe - e0));
  }
  r.mass = m0 > 0.0 ? worst_m / m0 : worst_m;
  r.energy = std::abs(e0) > 0.0 ? worst_e / std::abs(e0) : worst_e;
  return r;
}

}  // namespace zk
