#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zk/diagnostics.hpp"
#include "zk/eigenbasis.hpp"
#include "zk/field.hpp"
#include "zk/weights.hpp"

namespace zk {

enum class Nonlinearity { Full, Saturated, Off };
enum class TimeScheme { Imex, ExplicitRK4 };

Nonlinearity parse_nonlinearity(std::string_view text);
std::string_view nonlinearity_name(Nonlinearity n);
TimeScheme parse_time_scheme(std::string_view text);
std::string_view time_scheme_name(TimeScheme s);

struct SolverConfig {
  BoundaryCase boundary_case = BoundaryCase::DirichletDirichlet;
  double L = 3.141592653589793;
  double X_max = 16.0;
  std::size_t N_x = 256;
  std::size_t l_max = 16;
  double b = 0.0;
  double T = 1.0;
  double dt = 1e-3;
  TimeScheme scheme = TimeScheme::Imex;
  Nonlinearity nonlinearity = Nonlinearity::Full;
  double h = 1.0;         // saturation parameter
  bool truncate = false;  // multiply u0 and f by eta(1/h - x)
  bool dealias = true;    // 3/2 padded y-nodes for the nonlinear product
  std::size_t series_every = 1;
  std::size_t snapshot_every = 0;  // 0: no snapshots
  bool record_profiles = false;
  bool record_weighted_terms = false;
  Weight weight{};  // weight of the weighted_norm series
  double leak_tolerance = 1e-8;

  std::size_t steps() const;
  /// Throws ConfigError on invalid values (including the explicit CFL bound).
  void validate() const;
};

/// Modal data on the solver grid. Empty callables mean zero data.
struct ProblemData {
  Field u0;                                                // l_max x N_x
  std::function<void(double t, std::vector<double>& mu)> boundary;  // modal mu(t), size l_max
  std::function<void(double t, Field& f)> forcing;         // l_max x N_x

  bool homogeneous() const noexcept { return !boundary && !forcing; }
};

struct Snapshot {
  double t = 0.0;
  Field u;
};

struct RunResult {
  Series series;
  Profiles profiles;
  std::vector<WeightedTerms> weighted_terms;
  std::vector<Snapshot> snapshots;
  Field final_state;
  double final_time = 0.0;
  std::size_t steps = 0;
  double right_leak = 0.0;  // worst right_edge_ratio over recorded steps
  bool leak_ok = true;
  bool blew_up = false;
  double blow_up_time = 0.0;
  std::string message;
};

/// Spectral-in-y, finite-difference-in-x method of lines for
/// u_t + b u_x + u_xxx + u_xyy + u u_x = f with u(t,0,y) = mu(t,y),
/// u = u_x = 0 at x = X_max. The state holds all x-columns; columns 0 and
/// N_x-1 carry the boundary values.
class ZkSolver {
 public:
  ZkSolver(SolverConfig cfg, ProblemData data);
  ~ZkSolver();
  ZkSolver(ZkSolver&&) noexcept;
  ZkSolver& operator=(ZkSolver&&) noexcept;

  const SolverConfig& config() const noexcept { return cfg_; }
  const EigenBasis& basis() const noexcept;
  const XGrid& grid() const noexcept;
  const FieldMeasure& measure() const noexcept;
  const ProblemData& data() const noexcept { return data_; }

  /// Time derivative of the interior columns (boundary columns zero).
  /// u's boundary columns are reset to mu(t) and 0 first.
  Field rhs(const Field& u, double t) const;
  /// Nonlinear term u u_x (or g_h'(u) u_x) per mode at every column.
  Field nonlinear(const Field& u) const;
  /// One step of the configured scheme; throws BlowUpError on non-finite values.
  void step(Field& u, double t, double dt) const;
  /// Initial state with boundary columns imposed (and truncation applied).
  Field initial_state() const;
  /// Integrates to T, recording diagnostics. Blow-up ends the run with a partial result.
  RunResult run() const;

  /// Spectral radius estimate of the linear x-operator used for the explicit bound.
  double linear_spectral_radius() const;

 private:
  struct Impl;
  SolverConfig cfg_;
  ProblemData data_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace zk
