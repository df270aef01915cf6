#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "zk/config.hpp"
#include "zk/solver.hpp"

namespace zk {

enum class Subcommand { Simulate, LinearCheck, Potential, DecayStudy, Invariants };
Subcommand parse_subcommand(std::string_view text);
std::string_view subcommand_name(Subcommand s);

struct ExperimentSpec {
  Subcommand subcommand = Subcommand::Simulate;
  Config config;
  std::filesystem::path out;
};

/// Exit codes of run_experiment and the zk tool.
enum ExitCode : int { kExitOk = 0, kExitTolerance = 1, kExitConfig = 2, kExitBlowUp = 3 };

SolverConfig solver_config(const Config& c);
InitialSpec initial_spec(const Config& c);
BoundarySpec boundary_spec(const Config& c);
ForcingSpec forcing_spec(const Config& c);
ProblemData problem_data(const Config& c, const EigenBasis& basis, const XGrid& grid);
/// Same, on the basis and grid the solver builds for cfg.
ProblemData problem_data(const Config& c, const SolverConfig& cfg);

/// Runs the subcommand, writing resolved.cfg, CSV outputs and MANIFEST into
/// spec.out. Configuration problems surface as ConfigError before anything
/// is written; later failures still leave a MANIFEST that records them.
int run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace zk
