#include "zk/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "zk/error.hpp"
#include "zk/quadrature.hpp"

namespace zk {

WeightKind parse_weight_kind(std::string_view text) {
  if (text == "exponential" || text == "exp") return WeightKind::Exponential;
  if (text == "power") return WeightKind::Power;
  if (text == "arctan" || text == "rho0") return WeightKind::Arctan;
  if (text == "unit" || text == "one") return WeightKind::Unit;
  throw ConfigError("unknown weight kind '" + std::string(text) + "'");
}

std::string_view weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::Exponential: return "exponential";
    case WeightKind::Power: return "power";
    case WeightKind::Arctan: return "arctan";
    case WeightKind::Unit: return "unit";
  }
  return "?";
}

Weight::Weight(WeightKind kind, double alpha, double exponent)
    : kind_(kind), alpha_(alpha), exponent_(exponent) {}

Weight make_weight(WeightKind kind, double alpha) {
  if ((kind == WeightKind::Exponential || kind == WeightKind::Power) && !(alpha > 0.0)) {
    throw ConfigError("weight parameter alpha must be positive for " +
                      std::string(weight_kind_name(kind)) + " weights");
  }
  return Weight(kind, alpha);
}

WeightJet Weight::base_jet(double x) const {
  WeightJet j;
  switch (kind_) {
    case WeightKind::Exponential: {
      const double a2 = 2.0 * alpha_;
      j.value = std::exp(a2 * x);
      j.d1 = a2 * j.value;
      j.d2 = a2 * j.d1;
      j.d3 = a2 * j.d2;
      break;
    }
    case WeightKind::Power: {
      const double p = 2.0 * alpha_;
      const double b = 1.0 + x;
      j.value = std::pow(b, p);
      j.d1 = p * std::pow(b, p - 1.0);
      j.d2 = p * (p - 1.0) * std::pow(b, p - 2.0);
      j.d3 = p * (p - 1.0) * (p - 2.0) * std::pow(b, p - 3.0);
      break;
    }
    case WeightKind::Arctan: {
      const double c = 2.0 / std::numbers::pi;
      const double q = 1.0 + x * x;
      j.value = 1.0 + c * std::atan(x);
      j.d1 = c / q;
      j.d2 = -2.0 * c * x / (q * q);
      j.d3 = c * (6.0 * x * x - 2.0) / (q * q * q);
      break;
    }
    case WeightKind::Unit:
      break;
  }
  return j;
}

WeightJet Weight::jet(double x) const {
  const WeightJet r = base_jet(x);
  if (exponent_ == 1.0) return r;
  // Faa di Bruno for rho^s.
  const double s = exponent_;
  const double ps = std::pow(r.value, s);
  const double q1 = r.d1 / r.value;
  const double q2 = r.d2 / r.value;
  const double q3 = r.d3 / r.value;
  WeightJet out;
  out.value = ps;
  out.d1 = ps * s * q1;
  out.d2 = ps * (s * (s - 1.0) * q1 * q1 + s * q2);
  out.d3 = ps * (s * (s - 1.0) * (s - 2.0) * q1 * q1 * q1 + 3.0 * s * (s - 1.0) * q1 * q2 + s * q3);
  return out;
}

namespace {
std::vector<double> admissibility_samples(double x_max) {
  constexpr std::size_t n = 1024;
  std::vector<double> xs(n);
  xs[0] = 0.0;
  const double lo = std::log10(x_max) - 6.0;
  const double hi = std::log10(x_max);
  for (std::size_t k = 1; k < n; ++k) {
    const double t = static_cast<double>(k - 1) / static_cast<double>(n - 2);
    xs[k] = std::pow(10.0, lo + t * (hi - lo));
  }
  xs[n - 1] = x_max;
  return xs;
}
}  // namespace

AdmissibilityCertificate check_admissible(const Weight& w, double x_max, int j_max) {
  if (!(x_max > 0.0)) throw ConfigError("admissibility check needs x_max > 0");
  j_max = std::clamp(j_max, 1, 3);
  AdmissibilityCertificate cert;
  cert.orders = j_max;
  bool ok = true;
  for (double x : admissibility_samples(x_max)) {
    const WeightJet r = w.jet(x);
    if (!(r.value > 0.0) || !std::isfinite(r.value)) {
      ok = false;
      continue;
    }
    const double ratios[3] = {std::abs(r.d1) / r.value, std::abs(r.d2) / r.value,
                              std::abs(r.d3) / r.value};
    for (int j = 0; j < j_max; ++j) {
      if (!std::isfinite(ratios[j])) ok = false;
      cert.constants[j] = std::max(cert.constants[j], ratios[j]);
    }
  }
  for (int j = 0; j < j_max; ++j) ok = ok && std::isfinite(cert.constants[j]);
  cert.pass = ok;
  return cert;
}

UniquenessCertificate check_uniqueness_hypotheses(const Weight& w, double x_max) {
  if (!(x_max > 0.0)) throw ConfigError("certificate needs x_max > 0");
  UniquenessCertificate c;
  c.min_derivative = std::numeric_limits<double>::infinity();
  for (double x : admissibility_samples(x_max)) {
    const WeightJet r = w.jet(x);
    const double inv = (r.d1 > 0.0) ? 1.0 / r.d1 : std::numeric_limits<double>::infinity();
    c.sqrt_ratio = std::max(c.sqrt_ratio, std::sqrt(r.value) * inv);
    c.cbrt_ratio = std::max(c.cbrt_ratio, std::cbrt(r.value) * inv);
    c.min_derivative = std::min(c.min_derivative, r.d1);
  }
  c.derivative_at_least_one = c.min_derivative >= 1.0;
  return c;
}

double weighted_l2(const Field& field, const XGrid& grid, const Weight& w) {
  if (field.points() != grid.size()) throw ShapeError("weighted_l2: field/grid size mismatch");
  const std::vector<double> q = uniform_weights(grid.size(), grid.dx());
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double col = 0.0;
    for (std::size_t l = 0; l < field.modes(); ++l) col += field(l, i) * field(l, i);
    sum += q[i] * w(grid.x(i)) * col;
  }
  return std::sqrt(sum);
}

}  // namespace zk
