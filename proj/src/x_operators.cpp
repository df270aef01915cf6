#include "zk/x_operators.hpp"

#include <array>
#include <map>
#include <vector>

#include "zk/error.hpp"

namespace zk {

namespace {

constexpr int kExtrap = 6;  // points used by the left ghost extrapolation

double lagrange_weight(int m, double target) {
  double w = 1.0;
  for (int k = 0; k < kExtrap; ++k) {
    if (k != m) w *= (target - k) / static_cast<double>(m - k);
  }
  return w;
}

// Row of the full-vector operator for a stencil of (offset, coefficient) pairs.
using Stencil = std::vector<std::pair<int, double>>;

void add_row(std::map<int, double>& row, int j, double c, int n) {
  if (j < 0) {
    for (int m = 0; m < kExtrap; ++m) row[m] += c * lagrange_weight(m, j);
  } else if (j > n - 1) {
    row[2 * (n - 1) - j] += c;
  } else {
    row[j] += c;
  }
}

XOperators::Sparse assemble(const Stencil& st, double scale, int n) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 1; i <= n - 2; ++i) {
    std::map<int, double> row;
    for (const auto& [off, c] : st) add_row(row, i + off, c * scale, n);
    for (const auto& [j, c] : row) {
      if (c != 0.0) trip.emplace_back(i - 1, j, c);
    }
  }
  XOperators::Sparse m(n - 2, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

XOperators::XOperators(const XGrid& grid) : grid_(grid) {
  const int n = static_cast<int>(grid.size());
  if (n < 16) throw ConfigError("x-grid needs at least 16 points");
  const double dx = grid.dx();
  const Stencil s1{{-2, 1.0}, {-1, -8.0}, {1, 8.0}, {2, -1.0}};
  const Stencil s3{{-3, 1.0}, {-2, -8.0}, {-1, 13.0}, {1, -13.0}, {2, 8.0}, {3, -1.0}};
  d1_ = assemble(s1, 1.0 / (12.0 * dx), n);
  d3_ = assemble(s3, 1.0 / (8.0 * dx * dx * dx), n);
}

double XOperators::trace_dx(std::span<const double> u) const {
  const double dx = grid_.dx();
  return (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * dx);
}

double XOperators::trace_dxx(std::span<const double> u) const {
  const double dx = grid_.dx();
  return (45.0 * u[0] - 154.0 * u[1] + 214.0 * u[2] - 156.0 * u[3] + 61.0 * u[4] - 10.0 * u[5]) /
         (12.0 * dx * dx);
}

void XOperators::gradient(std::span<const double> u, std::span<double> out) const {
  const std::size_t n = grid_.size();
  if (u.size() != n || out.size() != n) throw ShapeError("gradient: size mismatch");
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(n));
  Eigen::Map<Eigen::VectorXd> ov(out.data(), static_cast<Eigen::Index>(n));
  ov.segment(1, static_cast<Eigen::Index>(n - 2)) = d1_ * uv;
  ov(0) = trace_dx(u);
  ov(static_cast<Eigen::Index>(n - 1)) = 0.0;
}

}  // namespace zk
