#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace zk {

/// Boundary conditions at y = 0 and y = L.
enum class BoundaryCase {
  DirichletDirichlet,  // a) u = 0 at both walls
  NeumannNeumann,      // b) u_y = 0 at both walls
  DirichletNeumann,    // c) u = 0 at y = 0, u_y = 0 at y = L
  Periodic,            // d) L-periodic in y
};

/// Accepts "a".."d" or the enumerator names (case-insensitive).
BoundaryCase parse_boundary_case(std::string_view text);
std::string_view boundary_case_letter(BoundaryCase c);

/// Orthonormal eigenfunctions of -psi'' on [0, L] for one boundary family,
/// with a collocation grid whose quadrature integrates products of any two
/// basis functions exactly.
///
/// Modes are zero-based: mode 0 is the first eigenfunction. In the periodic
/// case the order is the constant, then (cos, sin) pairs by frequency.
class EigenBasis {
 public:
  BoundaryCase boundary_case() const noexcept { return case_; }
  double width() const noexcept { return width_; }
  std::size_t size() const noexcept { return lambdas_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  std::span<const double> eigenvalues() const noexcept { return lambdas_; }
  double eigenvalue(std::size_t mode) const { return lambdas_.at(mode); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// d^order/dy^order of the eigenfunction at any y (closed form).
  double evaluate(std::size_t mode, double y, int order = 0) const;

  /// psi_l(y_j): node_count() x size().
  const Eigen::MatrixXd& synthesis_matrix() const noexcept { return synthesis_; }
  /// w_j psi_l(y_j): size() x node_count().
  const Eigen::MatrixXd& analysis_matrix() const noexcept { return analysis_; }

  /// Coefficients c_l = <phi, psi_l> from samples at the nodes.
  std::vector<double> analyze(std::span<const double> values) const;
  /// Samples sum_l c_l psi_l(y_j); coeffs may be shorter than size().
  std::vector<double> synthesize(std::span<const double> coeffs) const;

 private:
  friend EigenBasis build_basis(BoundaryCase, double, std::size_t, std::size_t);

  BoundaryCase case_ = BoundaryCase::DirichletDirichlet;
  double width_ = 0.0;
  std::vector<double> lambdas_;
  std::vector<double> freqs_;
  std::vector<double> phases_;
  std::vector<double> amps_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Eigen::MatrixXd synthesis_;
  Eigen::MatrixXd analysis_;
};

/// Smallest node count for which the quadrature is exact on l_max modes.
std::size_t minimal_node_count(BoundaryCase c, std::size_t l_max);

/// Closed-form eigenpairs and collocation grid. n_nodes = 0 selects the
/// minimal count; larger counts give a finer (e.g. dealiasing) grid.
EigenBasis build_basis(BoundaryCase c, double width, std::size_t l_max, std::size_t n_nodes = 0);

/// First eigenvalue, i.e. the reciprocal of the sharp Poincare-Steklov constant.
double steklov_lambda1(const EigenBasis& basis);

}  // namespace zk
