#include "zk/data_sources.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "zk/error.hpp"
#include "zk/quadrature.hpp"
#include "zk/regularization.hpp"

namespace zk {

InitialKind parse_initial_kind(std::string_view text) {
  if (text == "zero") return InitialKind::Zero;
  if (text == "gaussian") return InitialKind::Gaussian;
  if (text == "random") return InitialKind::Random;
  throw ConfigError("unknown initial kind '" + std::string(text) + "'");
}

BoundaryKind parse_boundary_kind(std::string_view text) {
  if (text == "zero") return BoundaryKind::Zero;
  if (text == "sine") return BoundaryKind::Sine;
  throw ConfigError("unknown boundary kind '" + std::string(text) + "'");
}

ForcingKind parse_forcing_kind(std::string_view text) {
  if (text == "zero") return ForcingKind::Zero;
  if (text == "gaussian") return ForcingKind::Gaussian;
  throw ConfigError("unknown forcing kind '" + std::string(text) + "'");
}

Field make_initial(const InitialSpec& spec, const EigenBasis& basis, const XGrid& grid) {
  Field u(basis.size(), grid.size());
  if (spec.kind == InitialKind::Zero) return u;
  if (!(spec.width > 0.0)) throw ConfigError("initial.width must be positive");
  std::vector<double> coef(basis.size(), 0.0);
  if (spec.kind == InitialKind::Gaussian) {
    for (const auto& [m, c] : spec.modes) {
      if (m >= basis.size()) throw ConfigError("initial mode " + std::to_string(m + 1) + " exceeds l_max");
      coef[m] += c;
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t k = std::min(spec.random_modes, basis.size());
    for (std::size_t m = 0; m < k; ++m) coef[m] = dist(rng);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = (grid.x(i) - spec.x0) / spec.width;
    const double env = spec.amplitude * std::exp(-s * s);
    for (std::size_t l = 0; l < basis.size(); ++l) u(l, i) = env * coef[l];
  }
  if (spec.norm > 0.0) {
    const std::vector<double> q = uniform_weights(grid.size(), grid.dx());
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t l = 0; l < basis.size(); ++l) m += q[i] * u(l, i) * u(l, i);
    if (m > 0.0) u *= spec.norm / std::sqrt(m);
  }
  return u;
}

std::function<void(double, std::vector<double>&)> make_boundary(const BoundarySpec& spec,
                                                               std::size_t modes) {
  if (spec.kind == BoundaryKind::Zero || spec.amplitude == 0.0) return {};
  if (spec.mode >= modes) throw ConfigError("boundary.mode exceeds l_max");
  if (!(spec.ramp > 0.0)) throw ConfigError("boundary.ramp must be positive");
  return [spec](double t, std::vector<double>& mu) {
    std::fill(mu.begin(), mu.end(), 0.0);
    mu[spec.mode] = spec.amplitude * cutoff_eta(t / spec.ramp) * std::sin(spec.omega * t);
  };
}

std::function<void(double, Field&)> make_forcing(const ForcingSpec& spec, const XGrid& grid) {
  if (spec.kind == ForcingKind::Zero || spec.amplitude == 0.0) return {};
  if (!(spec.width > 0.0)) throw ConfigError("forcing.width must be positive");
  if (!(spec.ramp > 0.0)) throw ConfigError("forcing.ramp must be positive");
  std::vector<double> profile(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = (grid.x(i) - spec.x0) / spec.width;
    profile[i] = std::exp(-s * s);
  }
  return [spec, profile](double t, Field& f) {
    if (spec.mode >= f.modes()) throw ConfigError("forcing.mode exceeds l_max");
    f.fill(0.0);
    const double a = spec.amplitude * cutoff_eta(t / spec.ramp) * std::cos(spec.omega * t);
    for (std::size_t i = 0; i < profile.size(); ++i) f(spec.mode, i) = a * profile[i];
  };
}

}  // namespace zk
