#include "zk/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {

using cd = std::complex<double>;

double cubic(double w, double a, double theta) { return (w * w + a) * w - theta; }

double newton_polish(double w, double a, double theta) {
  for (int it = 0; it < 4; ++it) {
    const double d = 3.0 * w * w + a;
    if (d == 0.0) break;
    const double next = w - cubic(w, a, theta) / d;
    if (std::abs(cubic(next, a, theta)) >= std::abs(cubic(w, a, theta))) break;
    w = next;
  }
  return w;
}

// Real roots of w^3 + a w - theta = 0, ascending (one or three entries used).
struct RealRoots {
  std::array<double, 3> w{};
  int count = 0;
};

RealRoots real_roots(double a, double theta) {
  RealRoots r;
  const double thr = window_threshold(a, 0.0);
  if (a < 0.0 && std::abs(theta) < thr) {
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double arg = std::clamp(-3.0 * theta / (a * m), -1.0, 1.0);
    const double phi0 = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      r.w[static_cast<std::size_t>(k)] =
          newton_polish(m * std::cos(phi0 - 2.0 * std::numbers::pi * k / 3.0), a, theta);
    }
    std::sort(r.w.begin(), r.w.end());
    r.count = 3;
    return r;
  }
  double w = 0.0;
  if (theta != 0.0) {
    // u^3 = theta/2 + sgn(theta) sqrt(D), w = u - a/(3u): no cancellation.
    const double d = 0.25 * theta * theta + a * a * a / 27.0;
    const double u = std::cbrt(0.5 * theta + std::copysign(std::sqrt(std::max(d, 0.0)), theta));
    w = (u != 0.0) ? u - a / (3.0 * u) : 0.0;
    w = newton_polish(w, a, theta);
  }
  r.w[0] = w;
  r.count = 1;
  return r;
}

cd cubic_z(cd z, double a, cd p) { return (z * z - a) * z + p; }

cd newton_polish_z(cd z, double a, cd p) {
  for (int it = 0; it < 6; ++it) {
    const cd d = 3.0 * z * z - a;
    if (std::abs(d) == 0.0) break;
    const cd next = z - cubic_z(z, a, p) / d;
    if (std::abs(cubic_z(next, a, p)) >= std::abs(cubic_z(z, a, p))) break;
    z = next;
  }
  return z;
}

}  // namespace

double phi(double xi, double lambda, double b) noexcept { return xi * xi * xi - b * xi + lambda * xi; }

double phi(double xi, std::size_t mode, double b, const EigenBasis& basis) {
  return phi(xi, basis.eigenvalue(mode), b);
}

double window_threshold(double lambda, double b) noexcept {
  if (!(lambda < b)) return 0.0;
  const double s = (b - lambda) / 3.0;
  return 2.0 * s * std::sqrt(s);
}

bool in_oscillatory_window(double theta, double lambda, double b) noexcept {
  return lambda < b && std::abs(theta) < window_threshold(lambda, b);
}

double kappa(double theta, double lambda, double b) {
  if (in_oscillatory_window(theta, lambda, b)) {
    throw DomainError("kappa: theta inside the oscillatory window");
  }
  if (theta == 0.0) return 0.0;
  const double a = lambda - b;
  const double t = std::abs(theta);
  double lo = (a < 0.0) ? 2.0 * std::sqrt(-a / 3.0) : 0.0;
  double hi = std::cbrt(t) + (a < 0.0 ? std::sqrt(-a) : 0.0);
  if (a < 0.0) lo = std::min(lo, hi);
  double x = std::clamp(std::cbrt(t), lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cubic(x, a, t);
    if (f == 0.0) break;
    if (f > 0.0) hi = x; else lo = x;
    const double d = 3.0 * x * x + a;
    double next = (d > 0.0) ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  return std::copysign(x, theta);
}

double kappa(double theta, std::size_t mode, double b, const EigenBasis& basis) {
  return kappa(theta, basis.eigenvalue(mode), b);
}

std::complex<double> root_z0(std::complex<double> p, double lambda, double b) {
  if (!(p.real() > 0.0)) throw DomainError("root_z0: requires Re p > 0");
  const double a = lambda - b;
  // Depressed cubic z^3 + P z + Q with P = -a, Q = p.
  const cd P(-a, 0.0);
  const cd Q = p;
  const cd s = std::sqrt(Q * Q / 4.0 + P * P * P / 27.0);
  cd u3 = -Q / 2.0 + s;
  const cd alt = -Q / 2.0 - s;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  const cd u = std::pow(u3, 1.0 / 3.0);
  const cd omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  cd best{0.0, 0.0};
  double best_re = std::numeric_limits<double>::infinity();
  cd uk = u;
  for (int k = 0; k < 3; ++k) {
    cd z = (std::abs(uk) > 0.0) ? uk - P / (3.0 * uk) : cd{0.0, 0.0};
    z = newton_polish_z(z, a, p);
    if (z.real() < best_re) {
      best_re = z.real();
      best = z;
    }
    uk *= omega;
  }
  return best;
}

DispersionRoot root_r0(double theta, double lambda, double b) {
  DispersionRoot r;
  r.theta = theta;
  const double a = lambda - b;
  const RealRoots rr = real_roots(a, theta);
  if (rr.count == 3) {
    r.branch = RootBranch::Oscillatory;
    r.value = cd(0.0, rr.w[1]);
    return r;
  }
  const double w = rr.w[0];
  const double s2 = a + 0.75 * w * w;
  cd z(-std::sqrt(std::max(s2, 0.0)), -0.5 * w);
  if (s2 > 0.0) {
    const cd polished = newton_polish_z(z, a, cd(0.0, theta));
    if (polished.real() < 0.0) z = polished;
  }
  r.value = z;
  r.branch = RootBranch::Decaying;
  return r;
}

DispersionRoot root_r0(double theta, std::size_t mode, double b, const EigenBasis& basis) {
  DispersionRoot r = root_r0(theta, basis.eigenvalue(mode), b);
  r.mode = mode;
  return r;
}

double root_residual(std::complex<double> r, double theta, double lambda, double b) noexcept {
  return std::abs((r * r - (lambda - b)) * r + cd(0.0, theta));
}

}  // namespace zk
