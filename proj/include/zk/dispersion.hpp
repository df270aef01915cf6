#pragma once

#include <complex>
#include <cstddef>

#include "zk/eigenbasis.hpp"

namespace zk {

enum class RootBranch { Decaying, Oscillatory };

/// r0 = p + i q: limit as eps -> +0 of the root of z^3 - (lambda - b) z + (eps + i theta) = 0
/// with negative real part.
struct DispersionRoot {
  double theta = 0.0;
  std::size_t mode = 0;
  std::complex<double> value{0.0, 0.0};
  RootBranch branch = RootBranch::Decaying;

  double p() const noexcept { return value.real(); }
  double q() const noexcept { return value.imag(); }
};

/// phi(xi) = xi^3 - b xi + lambda xi.
double phi(double xi, double lambda, double b) noexcept;
double phi(double xi, std::size_t mode, double b, const EigenBasis& basis);

/// 2((b - lambda)/3)^{3/2} for lambda < b, else 0. Frequencies with |theta| below
/// it are purely oscillatory.
double window_threshold(double lambda, double b) noexcept;
bool in_oscillatory_window(double theta, double lambda, double b) noexcept;

/// Inverse of phi on its outer monotone branch. Throws DomainError for theta
/// strictly inside the oscillatory window.
double kappa(double theta, double lambda, double b);
double kappa(double theta, std::size_t mode, double b, const EigenBasis& basis);

/// Root of z^3 - (lambda - b) z + p = 0 with Re z < 0. Requires Re p > 0.
std::complex<double> root_z0(std::complex<double> p, double lambda, double b);

DispersionRoot root_r0(double theta, double lambda, double b);
DispersionRoot root_r0(double theta, std::size_t mode, double b, const EigenBasis& basis);

/// |r^3 - (lambda - b) r + i theta|.
double root_residual(std::complex<double> r, double theta, double lambda, double b) noexcept;

}  // namespace zk
