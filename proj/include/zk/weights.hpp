#pragma once

#include <array>
#include <string_view>

#include "zk/field.hpp"

namespace zk {

enum class WeightKind { Exponential, Power, Arctan, Unit };

WeightKind parse_weight_kind(std::string_view text);
std::string_view weight_kind_name(WeightKind k);

/// rho and its first three derivatives at one point.
struct WeightJet {
  double value = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Smooth positive weight on x >= 0 with closed-form derivatives:
///   Exponential(alpha): e^{2 alpha x}
///   Power(alpha):       (1 + x)^{2 alpha}
///   Arctan:             1 + (2/pi) arctan x
///   Unit:               1
/// optionally raised to a real power s.
class Weight {
 public:
  Weight() = default;
  Weight(WeightKind kind, double alpha, double exponent = 1.0);

  WeightKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double exponent() const noexcept { return exponent_; }

  WeightJet jet(double x) const;
  double operator()(double x) const { return jet(x).value; }

  /// rho^s, again with exact derivatives.
  Weight pow(double s) const { return Weight(kind_, alpha_, exponent_ * s); }

 private:
  WeightJet base_jet(double x) const;

  WeightKind kind_ = WeightKind::Unit;
  double alpha_ = 0.0;
  double exponent_ = 1.0;
};

/// Validates alpha (> 0 for Exponential and Power).
Weight make_weight(WeightKind kind, double alpha = 0.0);

struct AdmissibilityCertificate {
  /// constants[j-1] = max over samples of |rho^{(j)}| / rho.
  std::array<double, 3> constants{0.0, 0.0, 0.0};
  int orders = 0;
  bool pass = false;
};

/// Samples x = 0 plus 1023 log-spaced points up to x_max.
AdmissibilityCertificate check_admissible(const Weight& w, double x_max, int j_max = 3);

/// Sampled versions of the extra hypotheses used by the uniqueness results:
/// rho^{1/2} <= c rho', rho' >= 1 and rho^{1/3} <= c0 rho'. Informational only.
struct UniquenessCertificate {
  double sqrt_ratio = 0.0;       // max rho^{1/2} / rho'
  double min_derivative = 0.0;   // min rho'
  double cbrt_ratio = 0.0;       // max rho^{1/3} / rho'
  bool derivative_at_least_one = false;
};
UniquenessCertificate check_uniqueness_hypotheses(const Weight& w, double x_max);

/// sqrt of the quadrature of sum_l u_l(x)^2 rho(x) over the grid.
double weighted_l2(const Field& field, const XGrid& grid, const Weight& w);

}  // namespace zk
