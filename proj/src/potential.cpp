#include "zk/potential.hpp"

#include <cmath>
#include <numbers>

#include "zk/error.hpp"
#include "zk/fft.hpp"
#include "zk/parallel.hpp"

namespace zk {

using cd = std::complex<double>;

TimeGrid make_time_grid(std::span<const double> times) {
  if (times.size() < 2) throw ConfigError("time grid needs at least two samples");
  if (std::abs(times[0]) > 1e-12) throw ConfigError("time grid must start at t = 0");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw ConfigError("time grid must be increasing");
  for (std::size_t n = 1; n < times.size(); ++n) {
    if (std::abs(times[n] - times[n - 1] - dt) > 1e-9 * dt) {
      throw ConfigError("time grid is not uniform at sample " + std::to_string(n));
    }
  }
  return TimeGrid{times.size(), dt};
}

BoundaryData::BoundaryData(TimeGrid grid, Field modal) : grid_(grid), modal_(std::move(modal)) {
  if (grid_.count < 2 || !(grid_.dt > 0.0)) throw ConfigError("boundary data needs a uniform grid");
  if (modal_.points() != grid_.count) throw ShapeError("boundary data: sample count mismatch");
  if (!modal_.all_finite()) throw ConfigError("boundary data contains non-finite samples");
}

BoundaryData BoundaryData::from_samples(TimeGrid grid, const EigenBasis& basis,
                                        std::span<const double> samples) {
  const std::size_t nn = basis.node_count();
  if (samples.size() != grid.count * nn) throw ShapeError("boundary samples: expected count x nodes");
  Field modal(basis.size(), grid.count);
  for (std::size_t n = 0; n < grid.count; ++n) {
    const std::vector<double> c = basis.analyze(samples.subspan(n * nn, nn));
    for (std::size_t l = 0; l < c.size(); ++l) modal(l, n) = c[l];
  }
  return BoundaryData(grid, std::move(modal));
}

BoundaryData BoundaryData::from_function(TimeGrid grid, const EigenBasis& basis,
                                         const std::function<double(double, double)>& mu) {
  const auto nodes = basis.nodes();
  std::vector<double> samples(grid.count * nodes.size());
  for (std::size_t n = 0; n < grid.count; ++n) {
    for (std::size_t j = 0; j < nodes.size(); ++j) samples[n * nodes.size() + j] = mu(grid.t(n), nodes[j]);
  }
  return from_samples(grid, basis, samples);
}

std::size_t window_length(const TimeGrid& grid, double pad) {
  if (!(pad >= 1.5)) throw ConfigError("window padding factor must be at least 1.5");
  const double horizon = grid.horizon();
  auto m = static_cast<std::size_t>(std::llround(pad * horizon / grid.dt));
  const auto taper_end = static_cast<std::size_t>(std::llround(1.25 * horizon / grid.dt));
  m = std::max(m, taper_end + 2);
  if (m % 2 == 0) ++m;
  return m;
}

Field windowed_samples(const BoundaryData& mu, double pad) {
  const TimeGrid& g = mu.grid();
  const std::size_t m = window_length(g, pad);
  const double horizon = g.horizon();
  const double taper = 0.25 * horizon;
  Field w(mu.modes(), m);
  for (std::size_t l = 0; l < mu.modes(); ++l) {
    const double last = mu.modal()(l, g.count - 1);
    for (std::size_t n = 0; n < m; ++n) {
      if (n < g.count) {
        w(l, n) = mu.modal()(l, n);
      } else {
        const double s = (g.t(n) - horizon) / taper;
        w(l, n) = (s < 1.0) ? last * 0.5 * (1.0 + std::cos(std::numbers::pi * s)) : 0.0;
      }
    }
  }
  return w;
}

ModalSpectrum::ModalSpectrum(std::size_t modes, std::size_t window, double dt, std::size_t samples)
    : modes_(modes), window_(window), samples_(samples), dt_(dt), c_(modes * (window / 2 + 1)) {}

double ModalSpectrum::theta(std::size_t k) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(window_) * dt_);
}

double ModalSpectrum::dtheta() const noexcept { return theta(1); }

double ModalSpectrum::mode_energy(std::size_t l) const {
  double s = 0.0;
  for (std::size_t k = 0; k < bins(); ++k) {
    // Bins above zero stand for a conjugate pair; the Nyquist bin exists only for even windows.
    const bool paired = k > 0 && !(window_ % 2 == 0 && k == window_ / 2);
    s += (paired ? 2.0 : 1.0) * std::norm((*this)(l, k));
  }
  return s * dtheta() / (2.0 * std::numbers::pi);
}

double ModalSpectrum::energy() const {
  double s = 0.0;
  for (std::size_t l = 0; l < modes_; ++l) s += mode_energy(l);
  return s;
}

double window_energy(const Field& windowed, double dt) {
  double s = 0.0;
  for (double v : windowed.data()) s += v * v;
  return s * dt;
}

ModalSpectrum transform_window(const Field& w, double dt, std::size_t samples) {
  ModalSpectrum spec(w.modes(), w.points(), dt, samples);
  RealFft fft(w.points());
  std::vector<cd> out(fft.spectrum_size());
  for (std::size_t l = 0; l < w.modes(); ++l) {
    fft.forward(w.mode(l), out);
    for (std::size_t k = 0; k < out.size(); ++k) spec(l, k) = dt * out[k];
  }
  return spec;
}

ModalSpectrum transform_mu(const BoundaryData& mu, double pad) {
  return transform_window(windowed_samples(mu, pad), mu.grid().dt, mu.grid().count);
}

BoundaryPotential::BoundaryPotential(ModalSpectrum spectrum, const EigenBasis& basis, double b)
    : spectrum_(std::move(spectrum)) {
  if (spectrum_.modes() > basis.size()) throw ShapeError("potential: spectrum has more modes than the basis");
  const std::size_t nb = spectrum_.bins();
  roots_.resize(spectrum_.modes() * nb);
  parallel_for(spectrum_.modes(), [&](std::size_t l) {
    for (std::size_t k = 0; k < nb; ++k) roots_[l * nb + k] = root_r0(spectrum_.theta(k), l, b, basis);
  });
}

ModalSpectrum BoundaryPotential::spectrum_at(double x) const {
  if (x < 0.0) throw DomainError("boundary potential is defined for x >= 0");
  ModalSpectrum s = spectrum_;
  for (std::size_t l = 0; l < s.modes(); ++l) {
    for (std::size_t k = 0; k < s.bins(); ++k) s(l, k) *= std::exp(root(l, k).value * x);
  }
  return s;
}

Field BoundaryPotential::eval(double x) const {
  const ModalSpectrum s = spectrum_at(x);
  Field out(s.modes(), s.window());
  RealFft fft(s.window());
  std::vector<cd> in(s.bins());
  for (std::size_t l = 0; l < s.modes(); ++l) {
    for (std::size_t k = 0; k < s.bins(); ++k) in[k] = s(l, k) / s.dt();
    fft.inverse(in, out.mode(l));
  }
  return out;
}

Field BoundaryPotential::eval_at(std::size_t n, std::span<const double> xs) const {
  for (double x : xs) {
    if (x < 0.0) throw DomainError("boundary potential is defined for x >= 0");
  }
  const ModalSpectrum& s = spectrum_;
  const std::size_t m = s.window();
  const std::size_t nb = s.bins();
  // e^{i theta_k t_n} = e^{2 pi i k n / M}
  std::vector<cd> phase(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t kn = (k * n) % m;
    phase[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(kn) / static_cast<double>(m));
  }
  const double scale = 1.0 / (static_cast<double>(m) * s.dt());
  const bool even = m % 2 == 0;
  Field out(s.modes(), xs.size());
  parallel_for(s.modes(), [&](std::size_t l) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        const double w = (k == 0 || (even && k == m / 2)) ? 1.0 : 2.0;
        acc += w * (s(l, k) * std::exp(root(l, k).value * xs[i]) * phase[k]).real();
      }
      out(l, i) = acc * scale;
    }
  });
  return out;
}

Field eval_J(const ModalSpectrum& spectrum, double x, const EigenBasis& basis, double b) {
  if (x < 0.0) throw DomainError("boundary potential is defined for x >= 0");
  return BoundaryPotential(spectrum, basis, b).eval(x);
}

std::vector<double> modal_to_nodes(const Field& modal_series, const EigenBasis& basis) {
  const std::size_t nn = basis.node_count();
  std::vector<double> out(modal_series.points() * nn);
  std::vector<double> c(modal_series.modes());
  for (std::size_t n = 0; n < modal_series.points(); ++n) {
    for (std::size_t l = 0; l < c.size(); ++l) c[l] = modal_series(l, n);
    const std::vector<double> v = basis.synthesize(c);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(n * nn));
  }
  return out;
}

JResidual residual_J(const ModalSpectrum& spectrum, double x0, double dx, std::size_t n_points,
                     const EigenBasis& basis, double b) {
  if (n_points < 7) throw ConfigError("residual_J needs at least 7 x-points");
  if (!(x0 > 0.0) || !(dx > 0.0)) throw ConfigError("residual_J needs x0 > 0 and dx > 0");
  const BoundaryPotential pot(spectrum, basis, b);
  const std::size_t nb = spectrum.bins();
  const bool even = spectrum.window() % 2 == 0;
  double res2 = 0.0;
  double ref2 = 0.0;
  std::vector<cd> j(n_points);
  for (std::size_t l = 0; l < spectrum.modes(); ++l) {
    const double lam = basis.eigenvalue(l);
    for (std::size_t k = 0; k < nb; ++k) {
      const cd r = pot.root(l, k).value;
      for (std::size_t i = 0; i < n_points; ++i) {
        j[i] = spectrum(l, k) * std::exp(r * (x0 + static_cast<double>(i) * dx));
      }
      const double w = (k == 0 || (even && k == spectrum.window() / 2)) ? 1.0 : 2.0;
      const cd itheta(0.0, spectrum.theta(k));
      for (std::size_t i = 2; i + 2 < n_points; ++i) {
        const cd d1 = (j[i + 1] - j[i - 1]) / (2.0 * dx);
        const cd d3 = (j[i + 2] - 2.0 * j[i + 1] + 2.0 * j[i - 1] - j[i - 2]) / (2.0 * dx * dx * dx);
        const cd jt = itheta * j[i];
        res2 += w * std::norm(jt + (b - lam) * d1 + d3);
        ref2 += w * std::norm(jt);
      }
    }
  }
  const double scale = spectrum.dtheta() / (2.0 * std::numbers::pi) * dx;
  JResidual out;
  out.absolute = std::sqrt(res2 * scale);
  out.reference = std::sqrt(ref2 * scale);
  out.relative = out.reference > 0.0 ? out.absolute / out.reference : 0.0;
  return out;
}

}  // namespace zk
