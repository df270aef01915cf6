#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "zk/eigenbasis.hpp"
#include "zk/field.hpp"
#include "zk/weights.hpp"
#include "zk/x_operators.hpp"

namespace zk {

struct MassEnergy {
  double mass = 0.0;    // int int u^2
  double energy = 0.0;  // int int (u_x^2 + u_y^2 - u^3/3)
};

/// int int rho u^2, int int rho (u_x^2 + u_y^2), int int rho u^3.
struct WeightedTerms {
  double u2 = 0.0;
  double grad2 = 0.0;
  double u3 = 0.0;
};

/// Quadrature over the half-strip grid for one basis: y by Parseval (and
/// Gauss-Legendre for the cubic term), x by the fourth-order extended trapezoid.
class FieldMeasure {
 public:
  FieldMeasure(const EigenBasis& basis, const XGrid& grid, double b = 0.0, Weight weight = {});

  const XGrid& grid() const noexcept { return grid_; }
  const XOperators& ops() const noexcept { return ops_; }
  const Weight& weight() const noexcept { return weight_; }

  double mass(const Field& u) const;
  MassEnergy mass_energy(const Field& u) const;
  /// int int rho u^2 for the configured weight.
  double weighted(const Field& u) const;
  WeightedTerms weighted_terms(const Field& u) const;
  /// sum_l u_x(0)^2, i.e. int_0^L u_x^2 at x = 0.
  double flux(const Field& u) const;
  /// int_0^L (u_xx^2 + b u_x^2) at x = 0.
  double energy_flux(const Field& u) const;
  /// Per-x profiles int u^2 dy and int (u_x^2 + u_y^2) dy.
  void profiles(const Field& u, std::span<double> mass_profile, std::span<double> grad_profile) const;
  /// Largest column norm over the last 5% of the grid relative to the largest overall.
  double right_edge_ratio(const Field& u) const;

 private:
  Field gradient(const Field& u) const;
  double cubic(const Field& u, bool weighted) const;

  const EigenBasis* basis_;
  XGrid grid_;
  XOperators ops_;
  double b_;
  Weight weight_;
  std::vector<double> qx_;
  std::vector<double> rho_;
  Eigen::MatrixXd gl_synth_;  // psi_l at Gauss-Legendre nodes
  Eigen::VectorXd gl_w_;
};

MassEnergy mass_energy(const Field& u, const EigenBasis& basis, const XGrid& grid);

/// Time series of one run. flux and energy_flux are the x = 0 boundary terms
/// of the mass and energy balances.
struct Series {
  std::vector<double> t;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> weighted_norm;  // int int rho u^2
  std::vector<double> boundary_flux;  // int u_x^2 at x = 0
  std::vector<double> energy_flux;    // int (u_xx^2 + b u_x^2) at x = 0

  std::size_t size() const noexcept { return t.size(); }
};

/// Space-time profiles at the series cadence: row n holds x-profiles at t[n].
struct Profiles {
  std::vector<double> t;
  std::vector<std::vector<double>> mass;  // int u^2 dy
  std::vector<std::vector<double>> grad;  // int (u_x^2 + u_y^2) dy
};

/// sup over x0 of int_0^T int_{x0}^{x0+1} (int u^2 dy) dx dt, x0 on grid points.
double lambda_plus(const Profiles& p, const XGrid& grid);
/// int_0^T int_0^r (int (u_x^2 + u_y^2) dy) dx dt.
double local_smoothing(const Profiles& p, const XGrid& grid, double r);

struct DecayThresholds {
  double c0 = 0.0;
  double L0 = std::numeric_limits<double>::infinity();
  double alpha0 = 0.0;
  double beta = 0.0;
  /// c in eps0 + eps0^2 <= c0 / (8 c L^2); NaN when not fitted.
  double c_fit = std::numeric_limits<double>::quiet_NaN();
  double eps0 = std::numeric_limits<double>::quiet_NaN();
};

/// Cases a and c only (NotApplicableError otherwise). c0 = L^2 lambda_1 / 2
/// is cross-checked against the basis.
DecayThresholds decay_thresholds(double b, double L, BoundaryCase c,
                                 double c_fit = std::numeric_limits<double>::quiet_NaN());

/// Largest root of eps + eps^2 = rhs.
double eps0_bound(double c0, double c_fit, double L);

/// Smallest c with (2/3) int u^3 rho <= (1/2) int |Du|^2 rho + c (n0 + n0^2) int u^2 rho
/// over the samples, n0 = ||u0||. Floored at 0. With keep_gradient = false the
/// gradient term is dropped, which gives a larger c that still satisfies the
/// inequality and a finite eps0 even when the gradient dominates everywhere.
double fit_cubic_constant(std::span<const WeightedTerms> samples, double u0_norm, bool keep_gradient = true);

struct DecayFit {
  double rate = 0.0;          // -slope of log(series) over the latter half
  bool monotone = true;       // e^{alpha beta t} series non-increasing within tol
  double worst_increase = 0.0;  // max relative increase against the running minimum
  std::size_t used = 0;
  std::string warning;
};

DecayFit fit_decay(std::span<const double> series, std::span<const double> t, double alpha_beta,
                   double tol = 0.01);

struct ConservationResiduals {
  double mass = 0.0;    // max_t |mass + int flux - mass(0)| / mass(0)
  double energy = 0.0;  // same for energy with the x = 0 energy flux, over |E(0)|
};

/// Requires the run to have mu = f = 0 (NotApplicableError otherwise).
ConservationResiduals conservation_residuals(const Series& s, bool homogeneous_data);

}  // namespace zk
