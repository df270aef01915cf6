#include <doctest.h>

#include <cmath>

#include "zk/error.hpp"
#include "zk/quadrature.hpp"
#include "zk/regularization.hpp"

using namespace zk;

namespace {
// Independent oracle: composite Gauss-Legendre of the bump over many panels.
double eta_oracle(double x) {
  auto bump = [](double s) { return (s <= 0.0 || s >= 1.0) ? 0.0 : std::exp(-1.0 / (s * (1.0 - s))); };
  auto integral = [&](double b) {
    const QuadratureRule r = gauss_legendre(8, 0.0, 1.0);
    const int panels = 4000;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a0 = b * p / panels, a1 = b * (p + 1) / panels;
      for (std::size_t k = 0; k < r.nodes.size(); ++k) s += (a1 - a0) * r.weights[k] * bump(a0 + (a1 - a0) * r.nodes[k]);
    }
    return s;
  };
  return integral(x) / integral(1.0);
}
}  // namespace

TEST_CASE("cutoff eta") {
  CHECK(cutoff_eta(-1.0) == 0.0);
  CHECK(cutoff_eta(2.0) == 1.0);
  CHECK(cutoff_eta(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x : {0.05, 0.2, 0.37, 0.5, 0.81, 0.99}) CHECK(cutoff_eta(x) == doctest::Approx(eta_oracle(x)).epsilon(1e-12));
  double prev = 0.0;
  for (int k = -10; k <= 1010; ++k) {
    const double x = k / 1000.0;
    const double v = cutoff_eta(x);
    CHECK(v >= prev);
    CHECK(std::abs(v + cutoff_eta(1.0 - x) - 1.0) <= 2.3e-16);
    prev = v;
  }
  const double h = 1e-5;
  for (double x : {0.1, 0.4, 0.75}) {
    CHECK((cutoff_eta(x + h) - cutoff_eta(x - h)) / (2 * h) == doctest::Approx(cutoff_eta_derivative(x)).epsilon(1e-7));
  }
}

TEST_CASE("saturated nonlinearity") {
  CHECK(g_h(5.0, 0.1).value == doctest::Approx(12.5).epsilon(1e-15));
  CHECK(g_h(5.0, 0.1).derivative == 5.0);
  CHECK(g_h(0.0, 0.3).value == 0.0);
  CHECK(g_h(100.0, 0.1).derivative <= 20.0);
  for (double h : {1.0, 0.5, 0.1, 0.01}) {
    for (double u = -5.0 / h; u <= 5.0 / h; u += 0.0371 / h) {
      const SaturatedValue g = g_h(u, h);
      CHECK(std::abs(g.derivative) <= 2.0 / h * (1.0 + 1e-15));
      CHECK(std::abs(g.derivative) <= 2.0 * std::abs(u) * (1.0 + 1e-15));
      if (std::abs(u) <= 1.0 / h) CHECK(g.value == 0.5 * u * u);
      const double d = 1e-6 / h;
      CHECK((g_h(u + d, h).value - g_h(u - d, h).value) / (2 * d) ==
            doctest::Approx(g.derivative).epsilon(1e-6).scale(1.0 / h));
    }
  }
  CHECK_THROWS_AS(g_h(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(g_h(1.0, 1.5), ConfigError);
}

TEST_CASE("data truncation") {
  const XGrid grid(401, 4.0);
  Field f(2, grid.size());
  f.fill(1.0);
  const Field t1 = truncate_data(f, grid, 1.0);
  CHECK(t1(0, 200) == 0.0);  // x = 2
  const Field t2 = truncate_data(f, grid, 0.5);
  CHECK(t2(1, 50) == 1.0);   // x = 0.5
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const double diff = f(0, i) - t2(0, i);
    if (x < 1.0 - 1e-12 || x > 2.0 + 1e-12) {
      CHECK(diff == doctest::Approx(x < 1.0 ? 0.0 : 1.0));
    }
  }
  CHECK_THROWS_AS(truncate_data(f, grid, 0.0), ConfigError);
  CHECK_THROWS_AS(truncate_data(Field(1, 3), grid, 0.5), ShapeError);
}
