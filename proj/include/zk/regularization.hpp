#pragma once

#include "zk/field.hpp"

namespace zk {

/// Smooth step: 0 for x <= 0, 1 for x >= 1, eta(x) + eta(1 - x) = 1 exactly.
/// eta(x) = I(x) / I(1), I(x) = int_0^x exp(-1 / (s (1 - s))) ds.
double cutoff_eta(double x);
/// eta'(x).
double cutoff_eta_derivative(double x);

struct SaturatedValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// Globally Lipschitz surrogate for u^2/2:
///   g_h'(u) = u eta(2 - h|u|) + (2 sgn u / h) eta(h|u| - 1), g_h(0) = 0,
/// so g_h(u) = u^2/2 for |u| <= 1/h and |g_h'| <= 2/h. Requires h in (0, 1].
SaturatedValue g_h(double u, double h);

/// Multiplies each column x_i by eta(1/h - x_i).
Field truncate_data(const Field& data, const XGrid& grid, double h);

}  // namespace zk
