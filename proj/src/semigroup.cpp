#include "zk/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zk/dispersion.hpp"
#include "zk/error.hpp"
#include "zk/fft.hpp"
#include "zk/parallel.hpp"
#include "zk/regularization.hpp"

namespace zk {

using cd = std::complex<double>;

StripGrid::StripGrid(double dx, double x_ext, double x_right) : dx_(dx) {
  if (!(dx > 0.0) || x_ext < 0.0 || x_right < 0.0) throw ConfigError("strip grid: bad extents");
  origin_ = static_cast<std::size_t>(std::ceil(x_ext / dx - 1e-9));
  const auto right = static_cast<std::size_t>(std::ceil(x_right / dx - 1e-9));
  n_ = origin_ + right + 1;
  if (n_ % 2 == 0) ++n_;
}

double StripGrid::xi(std::size_t k) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(n_) * dx_);
}

double StripField::norm() const {
  double s = 0.0;
  for (double v : values.data()) s += v * v;
  return std::sqrt(s * grid.dx());
}

StripSpectrum to_spectrum(const StripField& u) {
  StripSpectrum s;
  s.grid = u.grid;
  s.modes = u.values.modes();
  s.c.resize(s.modes * s.bins());
  RealFft fft(u.grid.size());
  for (std::size_t l = 0; l < s.modes; ++l) {
    fft.forward(u.values.mode(l), std::span<cd>(s.c.data() + l * s.bins(), s.bins()));
  }
  return s;
}

StripField from_spectrum(const StripSpectrum& s) {
  StripField u(s.grid, s.modes);
  RealFft fft(s.grid.size());
  for (std::size_t l = 0; l < s.modes; ++l) {
    fft.inverse(std::span<const cd>(s.c.data() + l * s.bins(), s.bins()), u.values.mode(l));
  }
  return u;
}

double edge_ratio(const StripField& u) {
  const std::size_t n = u.grid.size();
  const std::size_t w = std::min<std::size_t>(8, n / 2);
  const double peak = u.values.max_abs();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t l = 0; l < u.values.modes(); ++l) {
    for (std::size_t j = 0; j < w; ++j) {
      edge = std::max({edge, std::abs(u.values(l, j)), std::abs(u.values(l, n - 1 - j))});
    }
  }
  return edge / peak;
}

namespace {
std::vector<cd> multipliers(const StripGrid& g, std::size_t modes, double t, double b,
                            const EigenBasis& basis) {
  const std::size_t nb = g.size() / 2 + 1;
  std::vector<cd> e(modes * nb);
  for (std::size_t l = 0; l < modes; ++l) {
    const double lam = basis.eigenvalue(l);
    for (std::size_t k = 0; k < nb; ++k) e[l * nb + k] = std::polar(1.0, t * phi(g.xi(k), lam, b));
  }
  return e;
}
}  // namespace

StripField eval_S(const StripField& u0, double t, double b, const EigenBasis& basis, double edge_tol) {
  if (u0.values.modes() > basis.size()) throw ShapeError("eval_S: more modes than the basis");
  if (edge_ratio(u0) > edge_tol) {
    throw DomainError("eval_S: initial field does not decay at the strip ends");
  }
  StripSpectrum s = to_spectrum(u0);
  const std::vector<cd> e = multipliers(u0.grid, s.modes, t, b, basis);
  for (std::size_t i = 0; i < s.c.size(); ++i) s.c[i] *= e[i];
  return from_spectrum(s);
}

StripField apply_generator(const StripField& u, double b, const EigenBasis& basis) {
  StripSpectrum s = to_spectrum(u);
  for (std::size_t l = 0; l < s.modes; ++l) {
    const double lam = basis.eigenvalue(l);
    for (std::size_t k = 0; k < s.bins(); ++k) s(l, k) *= cd(0.0, phi(s.grid.xi(k), lam, b));
  }
  return from_spectrum(s);
}

DuhamelAccumulator::DuhamelAccumulator(const StripGrid& grid, std::size_t modes, double dt, double b,
                                       const EigenBasis& basis)
    : e_(multipliers(grid, modes, dt, b, basis)), dt_(dt) {
  if (modes > basis.size()) throw ShapeError("Duhamel: more modes than the basis");
  v_.grid = grid;
  v_.modes = modes;
  v_.c.assign(modes * v_.bins(), cd{0.0, 0.0});
}

void DuhamelAccumulator::set_initial(const StripSpectrum& u0) {
  if (started_) throw ConfigError("Duhamel: initial state must be set before the first push");
  if (u0.c.size() != v_.c.size()) throw ShapeError("Duhamel: initial spectrum shape mismatch");
  v_.c = u0.c;
}

void DuhamelAccumulator::push(const StripSpectrum& f) {
  if (f.c.size() != v_.c.size()) throw ShapeError("Duhamel: forcing shape mismatch");
  const double h = 0.5 * dt_;
  if (!started_) {
    started_ = true;
    last_f_ = f;
    return;
  }
  for (std::size_t i = 0; i < v_.c.size(); ++i) v_.c[i] = e_[i] * (v_.c[i] + h * last_f_.c[i]) + h * f.c[i];
  last_f_ = f;
  ++steps_;
}

StripField eval_K(std::span<const StripField> f, double dt, double b, const EigenBasis& basis) {
  if (f.empty()) throw ConfigError("eval_K needs at least one forcing sample");
  DuhamelAccumulator acc(f[0].grid, f[0].values.modes(), dt, b, basis);
  for (const StripField& fn : f) acc.push(to_spectrum(fn));
  return from_spectrum(acc.state());
}

StripField extend_to_strip(const Field& u, const StripGrid& strip) {
  StripField out(strip, u.modes());
  const std::size_t o = strip.origin();
  const double ext = strip.x_ext();
  const double ramp = 0.2 * ext;
  for (std::size_t j = 0; j < strip.size(); ++j) {
    std::size_t i = 0;
    double factor = 1.0;
    if (j >= o) {
      i = j - o;
    } else {
      i = o - j;
      factor = ramp > 0.0 ? cutoff_eta((strip.x(j) + ext) / ramp) : 0.0;
    }
    if (i >= u.points() || factor == 0.0) continue;
    for (std::size_t l = 0; l < u.modes(); ++l) out.values(l, j) = factor * u(l, i);
  }
  return out;
}

Field restrict_to_half(const StripField& u, std::size_t n_x) {
  const std::size_t o = u.grid.origin();
  if (o + n_x > u.grid.size()) throw ShapeError("strip grid does not cover the half-strip grid");
  Field out(u.values.modes(), n_x);
  for (std::size_t l = 0; l < out.modes(); ++l) {
    for (std::size_t i = 0; i < n_x; ++i) out(l, i) = u.values(l, o + i);
  }
  return out;
}

SuperpositionResult solve_linear_superposition(const SuperpositionInput& in) {
  if (!in.basis) throw ConfigError("superposition: basis missing");
  const EigenBasis& basis = *in.basis;
  const std::size_t modes = in.u0.modes();
  const std::size_t n_x = in.grid.size();
  if (in.u0.points() != n_x) throw ShapeError("superposition: u0 does not match the grid");
  if (in.times.count < 2) throw ConfigError("superposition: need at least two time samples");
  for (std::size_t n : in.output_steps) {
    if (n >= in.times.count) throw ConfigError("superposition: output step beyond the time grid");
  }

  const StripGrid strip(in.grid.dx(), in.x_ext, in.grid.x_max() + in.right_pad);
  const std::size_t o = strip.origin();
  DuhamelAccumulator acc(strip, modes, in.times.dt, in.b, basis);
  acc.set_initial(to_spectrum(extend_to_strip(in.u0, strip)));

  // x = 0 trace from the half spectrum: u(x_o) = (1/n) sum_k w_k Re(c_k e^{i xi_k x_o}).
  const std::size_t nb = strip.size() / 2 + 1;
  std::vector<cd> phase(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t ko = (k * o) % strip.size();
    phase[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(ko) /
                                   static_cast<double>(strip.size()));
  }
  auto trace = [&](const StripSpectrum& s, std::size_t l) {
    double acc_v = 0.0;
    for (std::size_t k = 0; k < nb; ++k) acc_v += (k == 0 ? 1.0 : 2.0) * (s(l, k) * phase[k]).real();
    return acc_v / static_cast<double>(strip.size());
  };

  SuperpositionResult res;
  res.strip_trace = Field(modes, in.times.count);
  res.trace_correction = Field(modes, in.times.count);
  std::vector<Field> strip_parts(in.output_steps.size());

  const StripSpectrum zero_f = [&] {
    StripSpectrum z;
    z.grid = strip;
    z.modes = modes;
    z.c.assign(modes * nb, cd{0.0, 0.0});
    return z;
  }();
  for (std::size_t n = 0; n < in.times.count; ++n) {
    const double t = in.times.t(n);
    acc.push(in.forcing ? to_spectrum(extend_to_strip(in.forcing(t), strip)) : zero_f);
    const StripSpectrum& s = acc.state();
    for (std::size_t l = 0; l < modes; ++l) res.strip_trace(l, n) = trace(s, l);
    for (std::size_t q = 0; q < in.output_steps.size(); ++q) {
      if (in.output_steps[q] == n) strip_parts[q] = restrict_to_half(from_spectrum(s), n_x);
    }
  }

  for (std::size_t n = 0; n < in.times.count; ++n) {
    std::vector<double> mu = in.mu ? in.mu(in.times.t(n)) : std::vector<double>(modes, 0.0);
    if (mu.size() < modes) mu.resize(modes, 0.0);
    for (std::size_t l = 0; l < modes; ++l) res.trace_correction(l, n) = mu[l] - res.strip_trace(l, n);
  }

  const BoundaryPotential pot(transform_mu(BoundaryData(in.times, res.trace_correction), in.time_pad), basis, in.b);
  std::vector<double> xs(n_x);
  for (std::size_t i = 0; i < n_x; ++i) xs[i] = in.grid.x(i);
  res.fields.reserve(in.output_steps.size());
  for (std::size_t q = 0; q < in.output_steps.size(); ++q) {
    Field f = std::move(strip_parts[q]);
    f += pot.eval_at(in.output_steps[q], xs);
    res.fields.push_back(std::move(f));
  }
  return res;
}

}  // namespace zk
