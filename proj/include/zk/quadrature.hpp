#pragma once

#include <cstddef>
#include <vector>

namespace zk {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Weights of the fourth-order extended trapezoid rule on a uniform grid
/// (end weights 3/8, 7/6, 23/24). Falls back to plain trapezoid for n < 7.
std::vector<double> uniform_weights(std::size_t n, double dx);

}  // namespace zk
