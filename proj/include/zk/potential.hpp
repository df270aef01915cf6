#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "zk/dispersion.hpp"
#include "zk/eigenbasis.hpp"
#include "zk/field.hpp"

namespace zk {

/// Uniform time grid t_n = n dt, n = 0..count-1.
struct TimeGrid {
  std::size_t count = 0;
  double dt = 0.0;

  double t(std::size_t n) const noexcept { return static_cast<double>(n) * dt; }
  double horizon() const noexcept { return count ? static_cast<double>(count - 1) * dt : 0.0; }
};

/// Builds a grid from explicit sample times; throws ConfigError unless they
/// start at 0 and are uniformly spaced (relative tolerance 1e-9).
TimeGrid make_time_grid(std::span<const double> times);

/// Boundary values mu(t_n, y) held as modal coefficients: modal(l, n).
class BoundaryData {
 public:
  BoundaryData() = default;
  BoundaryData(TimeGrid grid, Field modal);

  /// samples is row-major count x node_count.
  static BoundaryData from_samples(TimeGrid grid, const EigenBasis& basis,
                                   std::span<const double> samples);
  static BoundaryData from_function(TimeGrid grid, const EigenBasis& basis,
                                    const std::function<double(double t, double y)>& mu);

  const TimeGrid& grid() const noexcept { return grid_; }
  const Field& modal() const noexcept { return modal_; }
  std::size_t modes() const noexcept { return modal_.modes(); }

 private:
  TimeGrid grid_;
  Field modal_;
};

/// Samples on the transform window: zero for t < 0, mu on [0, T], cosine taper
/// to zero over [T, 1.25 T], zero padding to about pad * T (pad >= 1.5).
/// The window length is odd.
std::size_t window_length(const TimeGrid& grid, double pad = 2.5);
Field windowed_samples(const BoundaryData& mu, double pad = 2.5);

/// mu_hat(theta_k, l) = dt * sum_n mu_n e^{-i theta_k t_n} over the window,
/// stored for k = 0..M/2 (the remaining bins are conjugates).
class ModalSpectrum {
 public:
  ModalSpectrum() = default;
  ModalSpectrum(std::size_t modes, std::size_t window, double dt, std::size_t samples);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t window() const noexcept { return window_; }
  std::size_t bins() const noexcept { return window_ / 2 + 1; }
  std::size_t samples() const noexcept { return samples_; }
  double dt() const noexcept { return dt_; }
  double theta(std::size_t k) const noexcept;
  double dtheta() const noexcept;

  std::complex<double>& operator()(std::size_t l, std::size_t k) noexcept { return c_[l * bins() + k]; }
  std::complex<double> operator()(std::size_t l, std::size_t k) const noexcept { return c_[l * bins() + k]; }

  /// (dtheta / 2 pi) sum over all bins of |mu_hat|^2.
  double energy() const;
  double mode_energy(std::size_t l) const;

 private:
  std::size_t modes_ = 0;
  std::size_t window_ = 0;
  std::size_t samples_ = 0;
  double dt_ = 0.0;
  std::vector<std::complex<double>> c_;
};

ModalSpectrum transform_mu(const BoundaryData& mu, double pad = 2.5);
/// Transform of samples already laid out on a window (modes x M).
ModalSpectrum transform_window(const Field& windowed, double dt, std::size_t samples);

/// dt * sum |mu_n|^2 over the window (the Parseval partner of energy()).
double window_energy(const Field& windowed, double dt);

/// J(t, x, y; mu): each (theta_k, l) pair damped by e^{r0(theta_k, l) x}.
class BoundaryPotential {
 public:
  BoundaryPotential(ModalSpectrum spectrum, const EigenBasis& basis, double b);

  const ModalSpectrum& spectrum() const noexcept { return spectrum_; }
  const DispersionRoot& root(std::size_t l, std::size_t k) const { return roots_[l * spectrum_.bins() + k]; }

  /// Modal time series over the whole window: result(l, n).
  Field eval(double x) const;
  /// Modal values at time t_n for each x: result(l, i).
  Field eval_at(std::size_t n, std::span<const double> xs) const;
  /// Spectrum of J(., x, .).
  ModalSpectrum spectrum_at(double x) const;

 private:
  ModalSpectrum spectrum_;
  std::vector<DispersionRoot> roots_;
};

Field eval_J(const ModalSpectrum& spectrum, double x, const EigenBasis& basis, double b);

/// Modal time series to node values: row-major count x node_count.
std::vector<double> modal_to_nodes(const Field& modal_series, const EigenBasis& basis);

struct JResidual {
  double absolute = 0.0;   // discrete L2 of J_t + b J_x + J_xxx + J_xyy
  double reference = 0.0;  // discrete L2 of J_t on the same stations
  double relative = 0.0;
};

/// x-derivatives by second-order central differences on stations x0 + k dx,
/// k = 0..n_points-1 (residual on the interior n_points-4), J_t spectrally.
JResidual residual_J(const ModalSpectrum& spectrum, double x0, double dx, std::size_t n_points,
                     const EigenBasis& basis, double b);

}  // namespace zk
