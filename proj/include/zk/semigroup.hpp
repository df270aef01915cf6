#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "zk/eigenbasis.hpp"
#include "zk/field.hpp"
#include "zk/potential.hpp"

namespace zk {

/// Periodic grid x_j = -x_ext + j dx, j = 0..size-1, with an odd point count.
/// origin() is the index of x = 0, so solver nodes x_i sit at origin() + i.
class StripGrid {
 public:
  StripGrid() = default;
  /// Covers [-x_ext, x_right] (x_right rounded up to the grid, count made odd).
  StripGrid(double dx, double x_ext, double x_right);

  std::size_t size() const noexcept { return n_; }
  std::size_t origin() const noexcept { return origin_; }
  double dx() const noexcept { return dx_; }
  double x_ext() const noexcept { return static_cast<double>(origin_) * dx_; }
  double x(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(origin_)) * dx_;
  }
  /// Angular wavenumber of half-spectrum bin k.
  double xi(std::size_t k) const noexcept;

 private:
  std::size_t n_ = 0;
  std::size_t origin_ = 0;
  double dx_ = 0.0;
};

struct StripField {
  StripGrid grid;
  Field values;  // values(l, j)

  StripField() = default;
  StripField(const StripGrid& g, std::size_t modes) : grid(g), values(modes, g.size()) {}

  /// sqrt(dx sum_l sum_j u^2)
  double norm() const;
};

/// Spectral view: half spectrum per mode, coefficient(l, k).
struct StripSpectrum {
  StripGrid grid;
  std::size_t modes = 0;
  std::vector<std::complex<double>> c;

  std::size_t bins() const noexcept { return grid.size() / 2 + 1; }
  std::complex<double>& operator()(std::size_t l, std::size_t k) noexcept { return c[l * bins() + k]; }
  std::complex<double> operator()(std::size_t l, std::size_t k) const noexcept { return c[l * bins() + k]; }
};

StripSpectrum to_spectrum(const StripField& u);
StripField from_spectrum(const StripSpectrum& s);

/// Largest |u| in the outermost 8 cells on either side, relative to max |u|.
double edge_ratio(const StripField& u);

/// S(t; u0): multiplier e^{i t phi_l(xi)} per (xi, l). Throws DomainError when
/// edge_ratio(u0) exceeds edge_tol.
StripField eval_S(const StripField& u0, double t, double b, const EigenBasis& basis,
                  double edge_tol = 1e-12);

/// Generator A u = -(b u_x + u_xxx + u_xyy) applied spectrally.
StripField apply_generator(const StripField& u, double b, const EigenBasis& basis);

/// Integrating-factor trapezoid: V_{n+1} = E (V_n + dt/2 f_n) + dt/2 f_{n+1},
/// E = e^{i dt phi}. After n pushes past the first, state() is K(t_n) in spectral form.
class DuhamelAccumulator {
 public:
  DuhamelAccumulator(const StripGrid& grid, std::size_t modes, double dt, double b,
                     const EigenBasis& basis);

  /// Adds one forcing sample; the first call sets t = 0.
  void push(const StripSpectrum& f);
  /// Also evolves an extra homogeneous part: state = S(t)u0 + K(t).
  void set_initial(const StripSpectrum& u0);

  const StripSpectrum& state() const noexcept { return v_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  StripSpectrum v_;
  StripSpectrum last_f_;
  std::vector<std::complex<double>> e_;
  double dt_;
  std::size_t steps_ = 0;
  bool started_ = false;
};

/// K(t) for t = (f.size() - 1) dt from forcing samples f(t_n).
StripField eval_K(std::span<const StripField> f, double dt, double b, const EigenBasis& basis);

/// Extension of a half-strip field to the strip: values at x >= 0 copied
/// (zero beyond the field), even reflection for x < 0 multiplied by a smooth
/// cutoff rising over the leftmost 20% of [-x_ext, 0].
StripField extend_to_strip(const Field& u, const StripGrid& strip);
/// Restriction to the solver nodes x_i = i dx, i < n_x.
Field restrict_to_half(const StripField& u, std::size_t n_x);

struct SuperpositionInput {
  const EigenBasis* basis = nullptr;
  XGrid grid;
  double b = 0.0;
  TimeGrid times;
  double x_ext = 60.0;
  double right_pad = 0.0;
  // Period of the time window for J in units of the horizon. The boundary
  // response decays slowly in time, so wrap-around needs a long period.
  double time_pad = 2.5;
  Field u0;                                      // modes x n_x on the solver grid
  std::function<Field(double)> forcing;          // may be empty; modes x n_x
  std::function<std::vector<double>(double)> mu; // modal boundary values; may be empty
  std::vector<std::size_t> output_steps;         // indices into times
};

struct SuperpositionResult {
  std::vector<Field> fields;  // one per output step, on the solver grid
  Field trace_correction;     // g = mu - (S + K)|_{x=0}, modal time series
  Field strip_trace;          // (S + K)|_{x=0}
};

/// S(t)u0 + K(t)f restricted to x >= 0 plus J built from g = mu - (S + K)|_{x=0}.
SuperpositionResult solve_linear_superposition(const SuperpositionInput& in);

}  // namespace zk
