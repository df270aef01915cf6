#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "zk/eigenbasis.hpp"
#include "zk/field.hpp"

namespace zk {

/// (zero-based mode, coefficient) pairs describing a y-profile.
using ModeProfile = std::vector<std::pair<std::size_t, double>>;

enum class InitialKind { Zero, Gaussian, Random };
InitialKind parse_initial_kind(std::string_view text);

/// Gaussian: amplitude * exp(-((x - x0)/width)^2) * sum c_m psi_m(y).
/// Random: same envelope, coefficients uniform in [-1, 1] on the first
/// random_modes modes (seeded). norm > 0 rescales to that L2 norm.
struct InitialSpec {
  InitialKind kind = InitialKind::Zero;
  double amplitude = 1.0;
  double norm = 0.0;
  double x0 = 7.0;
  double width = 1.5;
  ModeProfile modes{{0, 1.0}};
  std::size_t random_modes = 4;
  std::uint64_t seed = 1;
};

Field make_initial(const InitialSpec& spec, const EigenBasis& basis, const XGrid& grid);

enum class BoundaryKind { Zero, Sine };
BoundaryKind parse_boundary_kind(std::string_view text);

/// Sine: mu(t, y) = amplitude * eta(t / ramp) * sin(omega t) * psi_mode(y).
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Zero;
  double amplitude = 0.0;
  double omega = 1.0;
  double ramp = 0.5;
  std::size_t mode = 0;
};

/// Empty function for zero data.
std::function<void(double, std::vector<double>&)> make_boundary(const BoundarySpec& spec,
                                                               std::size_t modes);

enum class ForcingKind { Zero, Gaussian };
ForcingKind parse_forcing_kind(std::string_view text);

/// Gaussian: f = amplitude * eta(t / ramp) * cos(omega t) * exp(-((x - x0)/width)^2) * psi_mode(y).
struct ForcingSpec {
  ForcingKind kind = ForcingKind::Zero;
  double amplitude = 0.0;
  double x0 = 5.0;
  double width = 1.0;
  double ramp = 0.5;
  double omega = 0.0;
  std::size_t mode = 0;
};

std::function<void(double, Field&)> make_forcing(const ForcingSpec& spec, const XGrid& grid);

}  // namespace zk
