#include "zk/regularization.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "zk/error.hpp"
#include "zk/quadrature.hpp"

namespace zk {

namespace {

double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

// Cumulative integral of the bump on a table over [0, 1/2]; cells integrated
// by 20-point Gauss-Legendre, values inside a cell by the same rule on [a, x].
class EtaTable {
 public:
  static constexpr std::size_t kCells = 256;

  EtaTable() : rule_(gauss_legendre(20, 0.0, 1.0)) {
    cum_[0] = 0.0;
    for (std::size_t c = 0; c < kCells; ++c) cum_[c + 1] = cum_[c] + integrate(left(c), left(c + 1));
    total_ = 2.0 * cum_[kCells];  // the bump is symmetric about 1/2
  }

  // eta on [0, 1/2].
  double lower_half(double x) const {
    const double pos = x * 2.0 * kCells;
    auto c = static_cast<std::size_t>(pos);
    if (c >= kCells) return cum_[kCells] / total_;
    return (cum_[c] + integrate(left(c), x)) / total_;
  }

  double total() const { return total_; }

 private:
  static double left(std::size_t c) { return 0.5 * static_cast<double>(c) / kCells; }

  double integrate(double a, double b) const {
    double s = 0.0;
    for (std::size_t k = 0; k < rule_.nodes.size(); ++k) s += rule_.weights[k] * bump(a + (b - a) * rule_.nodes[k]);
    return s * (b - a);
  }

  QuadratureRule rule_;
  std::array<double, kCells + 1> cum_{};
  double total_ = 0.0;
};

const EtaTable& table() {
  static const EtaTable t;
  return t;
}

}  // namespace

double cutoff_eta(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x <= 0.5) return table().lower_half(x);
  return 1.0 - table().lower_half(1.0 - x);
}

double cutoff_eta_derivative(double x) { return bump(x) / table().total(); }

SaturatedValue g_h(double u, double h) {
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("saturation parameter h must lie in (0, 1]");
  const double a = std::abs(u);
  SaturatedValue r;
  if (a <= 1.0 / h) {
    r.value = 0.5 * u * u;
    r.derivative = u;
    return r;
  }
  r.derivative = u * cutoff_eta(2.0 - h * a) + std::copysign(2.0 / h, u) * cutoff_eta(h * a - 1.0);
  // g_h is even; integrate g_h' from 1/h to |u| (smooth part on [1/h, 2/h], linear beyond).
  const double lo = 1.0 / h;
  const double hi = std::min(a, 2.0 / h);
  static const QuadratureRule rule = gauss_legendre(40, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = lo + (hi - lo) * rule.nodes[k];
    s += rule.weights[k] * (v * cutoff_eta(2.0 - h * v) + (2.0 / h) * cutoff_eta(h * v - 1.0));
  }
  r.value = 0.5 * lo * lo + s * (hi - lo);
  if (a > 2.0 / h) r.value += (2.0 / h) * (a - 2.0 / h);
  return r;
}

Field truncate_data(const Field& data, const XGrid& grid, double h) {
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("truncation parameter h must lie in (0, 1]");
  if (data.points() != grid.size()) throw ShapeError("truncate_data: field/grid size mismatch");
  Field out = data;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = cutoff_eta(1.0 / h - grid.x(i));
    for (std::size_t l = 0; l < out.modes(); ++l) out(l, i) *= w;
  }
  return out;
}

}  // namespace zk
