#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "zk/dispersion.hpp"
#include "zk/error.hpp"

using namespace zk;
using cd = std::complex<double>;

TEST_CASE("phi") {
  CHECK(phi(1.0, 1.0, 0.0) == 2.0);
  CHECK(phi(0.0, 3.0, 1.0) == 0.0);
  CHECK(phi(1.0, 1.0, 2.0) == 0.0);
  const auto basis = build_basis(BoundaryCase::DirichletDirichlet, 3.141592653589793, 3);
  CHECK(phi(1.0, 0, 0.0, basis) == doctest::Approx(2.0));
}

TEST_CASE("kappa inverts phi on the outer branch") {
  CHECK(kappa(2.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kappa(0.0, 2.0, 1.0) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-1e3, 1e3), lam(0.0, 1e3), bb(-5.0, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const double t = th(rng), l = lam(rng), b = bb(rng);
    if (in_oscillatory_window(t, l, b)) continue;
    const double xi = kappa(t, l, b);
    CHECK(std::abs(phi(xi, l, b) - t) <= 1e-12 * std::max(1.0, std::abs(t)));
    if (l < b) CHECK(std::abs(xi) >= 2.0 * std::sqrt((b - l) / 3.0) * (1.0 - 1e-12));
  }
  // lambda < b: threshold 2((b - lambda)/3)^{3/2} = 2 for b - lambda = 3.
  CHECK_THROWS_AS(kappa(2.0 * (1.0 - 1e-6), 0.0, 3.0), DomainError);
  CHECK(kappa(2.0, 0.0, 3.0) == doctest::Approx(2.0));
  CHECK(kappa(-2.5, 0.0, 3.0) < -2.0);
}

TEST_CASE("root_z0") {
  CHECK(std::abs(root_z0(cd(1.0, 0.0), 0.0, 0.0) - cd(-1.0, 0.0)) < 1e-14);
  // z^3 = -(i + 1e-8): cube roots of -i with Re < 0.
  const cd z = root_z0(cd(1e-8, 1.0), 0.0, 0.0);
  CHECK(std::abs(z - cd(-std::sqrt(3.0) / 2.0, -0.5)) < 1e-7);
  CHECK(std::abs((z * z) * z + cd(1e-8, 1.0)) < 1e-13);
  const cd z1 = root_z0(cd(1e-10, 0.0), 1.0, 0.0);
  CHECK(std::abs(z1 - cd(-1.0, 0.0)) < 1e-9);
  CHECK_THROWS_AS(root_z0(cd(0.0, 1.0), 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(root_z0(cd(-1.0, 1.0), 0.0, 0.0), DomainError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0), e(1e-6, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const cd p(e(rng), u(rng));
    const double a = u(rng);
    const cd r = root_z0(p, a, 0.0);
    CHECK(r.real() < 0.0);
    CHECK(std::abs((r * r - a) * r + p) <= 1e-12 * (1.0 + std::pow(std::abs(r), 3)));
  }
}

TEST_CASE("root_r0 examples") {
  const DispersionRoot r = root_r0(0.0, 1.0, 0.0);
  CHECK(r.branch == RootBranch::Decaying);
  CHECK(std::abs(r.value - cd(-1.0, 0.0)) < 1e-14);

  const DispersionRoot o = root_r0(0.0, 0.0, 3.0);
  CHECK(o.branch == RootBranch::Oscillatory);
  CHECK(o.p() == 0.0);
  CHECK(std::abs(o.q()) < 1e-15);

  const DispersionRoot s = root_r0(1.0, 2.0, 2.0);
  CHECK(std::abs(s.value - cd(-std::sqrt(3.0) / 2.0, -0.5)) < 1e-14);
}

TEST_CASE("root_r0 matches the small-eps continuation of root_z0") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> th(-30.0, 30.0), lam(0.0, 20.0), bb(-5.0, 5.0);
  for (int k = 0; k < 500; ++k) {
    const double t = th(rng), l = lam(rng), b = bb(rng);
    const double thr = window_threshold(l, b);
    if (thr > 0.0 && std::abs(std::abs(t) - thr) < 1e-2 * (1.0 + thr)) continue;
    const cd r = root_r0(t, l, b).value;
    const cd z = root_z0(cd(1e-9, t), l, b);
    CHECK(std::abs(r - z) < 1e-6 * (1.0 + std::abs(r)));
  }
}

TEST_CASE("branch structure, residual and symmetry") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(-1e3, 1e3), lam(0.0, 1e3), bb(-5.0, 5.0);
  for (int k = 0; k < 20000; ++k) {
    const double t = th(rng), l = lam(rng), b = bb(rng);
    const DispersionRoot r = root_r0(t, l, b);
    CHECK(root_residual(r.value, t, l, b) <= 1e-10 * (1.0 + std::pow(std::abs(r.value), 3)));
    CHECK(r.p() <= 0.0);
    if (l >= b && (t != 0.0 || l > b)) CHECK(r.p() < 0.0);
    const DispersionRoot m = root_r0(-t, l, b);
    CHECK(m.value == std::conj(r.value));
  }
  // Subcritical window: p = 0 and |q| <= sqrt((b - lambda)/3).
  for (int k = 0; k < 2000; ++k) {
    const double l = 0.0, b = 4.0;
    const double thr = window_threshold(l, b);
    const double t = thr * (2.0 * (k + 0.5) / 2000.0 - 1.0);
    const DispersionRoot r = root_r0(t, l, b);
    CHECK(r.branch == RootBranch::Oscillatory);
    CHECK(r.p() == 0.0);
    CHECK(std::abs(r.q()) <= std::sqrt((b - l) / 3.0) * (1.0 + 1e-12));
    CHECK(std::abs(phi(r.q(), l, b) - t) < 1e-12);
  }
}

TEST_CASE("continuity across the window boundary") {
  for (double gap : {3.0, 0.5, 4.9}) {
    const double thr = window_threshold(0.0, gap);
    for (double sign : {1.0, -1.0}) {
      const cd inside = root_r0(sign * thr * (1.0 - 1e-14), 0.0, gap).value;
      const cd outside = root_r0(sign * thr * (1.0 + 1e-14), 0.0, gap).value;
      CHECK(std::abs(inside - outside) < 1e-6);
    }
  }
}

TEST_CASE("growth bound constant") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> th(-1e3, 1e3), lam(0.0, 1e3), bb(-5.0, 5.0);
  double c = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double t = th(rng), l = lam(rng), b = bb(rng);
    const double den = std::cbrt(std::abs(t)) + std::sqrt(l) + std::sqrt(std::abs(b));
    if (den > 0.0) c = std::max(c, std::abs(root_r0(t, l, b).value) / den);
  }
  CHECK(c <= 2.0);
}
