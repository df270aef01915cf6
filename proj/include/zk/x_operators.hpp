#pragma once

#include <Eigen/Sparse>
#include <span>

#include "zk/field.hpp"

namespace zk {

/// Finite-difference x-operators on x_i = i dx acting on the full column
/// u_0..u_{N-1}. Interior rows i = 1..N-2 use fourth-order centred stencils
///   D1 = (-u_{i+2} + 8u_{i+1} - 8u_{i-1} + u_{i-2}) / (12 dx)
///   D3 = (-u_{i+3} + 8u_{i+2} - 13u_{i+1} + 13u_{i-1} - 8u_{i-2} + u_{i-3}) / (8 dx^3)
/// with left ghosts from quintic extrapolation through u_0..u_5 and right
/// ghosts by even reflection about x_{N-1} (u_x = 0 there).
class XOperators {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit XOperators(const XGrid& grid);

  const XGrid& grid() const noexcept { return grid_; }
  /// (N-2) x N, row r is grid point r + 1.
  const Sparse& d1() const noexcept { return d1_; }
  const Sparse& d3() const noexcept { return d3_; }

  /// One-sided u_x(0) and u_xx(0).
  double trace_dx(std::span<const double> u) const;
  double trace_dxx(std::span<const double> u) const;

  /// u_x at every grid point: one-sided at 0, D1 inside, 0 at x_{N-1}.
  void gradient(std::span<const double> u, std::span<double> out) const;

 private:
  XGrid grid_;
  Sparse d1_;
  Sparse d3_;
};

}  // namespace zk
