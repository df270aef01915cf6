#include "zk/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "zk/csv.hpp"
#include "zk/diagnostics.hpp"
#include "zk/error.hpp"
#include "zk/potential.hpp"
#include "zk/semigroup.hpp"
#include "zk/suite.hpp"
#include "zk/weights.hpp"

namespace zk {
namespace fs = std::filesystem;

Subcommand parse_subcommand(std::string_view text) {
  if (text == "simulate") return Subcommand::Simulate;
  if (text == "linear-check") return Subcommand::LinearCheck;
  if (text == "potential") return Subcommand::Potential;
  if (text == "decay-study") return Subcommand::DecayStudy;
  if (text == "invariants") return Subcommand::Invariants;
  throw ConfigError("unknown subcommand '" + std::string(text) + "'");
}

std::string_view subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::Simulate: return "simulate";
    case Subcommand::LinearCheck: return "linear-check";
    case Subcommand::Potential: return "potential";
    case Subcommand::DecayStudy: return "decay-study";
    case Subcommand::Invariants: return "invariants";
  }
  return "?";
}

namespace {

std::size_t one_based_mode(const Config& c, std::string_view key) {
  const long long m = c.integer(key);
  if (m < 1) throw ConfigError("key '" + std::string(key) + "': modes are numbered from 1");
  return static_cast<std::size_t>(m - 1);
}

}  // namespace

SolverConfig solver_config(const Config& c) {
  SolverConfig s;
  s.boundary_case = parse_boundary_case(c.text("solver.case"));
  s.L = c.real("solver.L");
  s.X_max = c.real("solver.X_max");
  s.N_x = c.count("solver.N_x");
  s.l_max = c.count("solver.l_max");
  s.b = c.real("solver.b");
  s.T = c.real("solver.T");
  s.dt = c.real("solver.dt");
  s.scheme = parse_time_scheme(c.text("solver.scheme"));
  s.nonlinearity = parse_nonlinearity(c.text("solver.nonlinearity"));
  s.h = c.real("solver.h");
  s.truncate = c.boolean("solver.truncate");
  s.dealias = c.boolean("solver.dealias");
  s.series_every = c.count("solver.series_every");
  s.snapshot_every = c.count("solver.snapshot_every");
  s.leak_tolerance = c.real("solver.leak_tolerance");
  s.weight = make_weight(parse_weight_kind(c.text("weight.kind")), c.real("weight.alpha"));
  s.record_profiles = c.boolean("diagnostics.profiles");
  s.validate();
  return s;
}

InitialSpec initial_spec(const Config& c) {
  InitialSpec s;
  s.kind = parse_initial_kind(c.text("initial.kind"));
  s.amplitude = c.real("initial.amplitude");
  s.norm = c.real("initial.norm");
  s.x0 = c.real("initial.x0");
  s.width = c.real("initial.width");
  s.modes = c.modes("initial.modes");
  s.random_modes = c.count("initial.random_modes");
  s.seed = static_cast<std::uint64_t>(c.count("initial.seed"));
  return s;
}

BoundarySpec boundary_spec(const Config& c) {
  BoundarySpec s;
  s.kind = parse_boundary_kind(c.text("boundary.kind"));
  s.amplitude = c.real("boundary.amplitude");
  s.omega = c.real("boundary.omega");
  s.ramp = c.real("boundary.ramp");
  s.mode = one_based_mode(c, "boundary.mode");
  return s;
}

ForcingSpec forcing_spec(const Config& c) {
  ForcingSpec s;
  s.kind = parse_forcing_kind(c.text("forcing.kind"));
  s.amplitude = c.real("forcing.amplitude");
  s.x0 = c.real("forcing.x0");
  s.width = c.real("forcing.width");
  s.ramp = c.real("forcing.ramp");
  s.omega = c.real("forcing.omega");
  s.mode = one_based_mode(c, "forcing.mode");
  return s;
}

ProblemData problem_data(const Config& c, const EigenBasis& basis, const XGrid& grid) {
  const BoundarySpec bs = boundary_spec(c);
  const ForcingSpec fs = forcing_spec(c);
  if (bs.kind != BoundaryKind::Zero && bs.mode >= basis.size()) throw ConfigError("key 'boundary.mode': exceeds solver.l_max");
  if (fs.kind != ForcingKind::Zero && fs.mode >= basis.size()) throw ConfigError("key 'forcing.mode': exceeds solver.l_max");
  ProblemData d;
  d.u0 = make_initial(initial_spec(c), basis, grid);
  d.boundary = make_boundary(bs, basis.size());
  d.forcing = make_forcing(fs, grid);
  return d;
}

ProblemData problem_data(const Config& c, const SolverConfig& cfg) {
  return problem_data(c, build_basis(cfg.boundary_case, cfg.L, cfg.l_max), XGrid(cfg.N_x, cfg.X_max));
}

namespace {

// Key/value rows of report.csv, kept in insertion order.
class Report {
 public:
  void add(std::string key, double v) { rows_.emplace_back(std::move(key), format_double(v)); }
  void add(std::string key, std::string v) { rows_.emplace_back(std::move(key), std::move(v)); }
  void add_flag(std::string key, bool v) { add(std::move(key), std::string(v ? "true" : "false")); }

  void write(const fs::path& path) const {
    CsvWriter w(path, {"key", "value"});
    for (const auto& [k, v] : rows_) {
      w.cell(k).cell(v);
      w.end_row();
    }
    w.close();
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

// Tracks written files for the MANIFEST.
class Outputs {
 public:
  Outputs(fs::path dir, const ExperimentSpec& spec) : dir_(std::move(dir)), spec_(spec) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
    const std::string cfg = spec.config.render();
    config_hash_ = hex64(fnv1a64(cfg));
    std::ofstream f(dir_ / "resolved.cfg", std::ios::binary);
    f << "# subcommand = " << subcommand_name(spec.subcommand) << "\n" << cfg;
    if (!f) throw Error("cannot write resolved.cfg");
    files_.push_back("resolved.cfg");
  }

  fs::path path(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }

  void manifest(const std::string& status, int exit_code, const std::string& message = {}) const {
    std::ofstream m(dir_ / "MANIFEST", std::ios::binary);
    m << "subcommand " << subcommand_name(spec_.subcommand) << "\n";
    m << "config_hash " << config_hash_ << "\n";
    m << "seed " << spec_.config.text("initial.seed") << "\n";
    m << "status " << status << "\n";
    m << "exit_code " << exit_code << "\n";
    if (!message.empty()) m << "message " << message << "\n";
    for (const std::string& f : files_) {
      std::ifstream in(dir_ / f, std::ios::binary);
      if (!in) continue;
      std::ostringstream ss;
      ss << in.rdbuf();
      const std::string bytes = ss.str();
      m << "file " << f << " bytes=" << bytes.size() << " fnv1a64=" << hex64(fnv1a64(bytes))
        << " config=" << config_hash_ << "\n";
    }
  }

 private:
  fs::path dir_;
  const ExperimentSpec& spec_;
  std::string config_hash_;
  std::vector<std::string> files_;
};

void write_series(const fs::path& path, const Series& s) {
  CsvWriter w(path, {"t", "mass", "energy", "weighted_norm", "boundary_flux", "energy_flux"});
  for (std::size_t n = 0; n < s.size(); ++n) {
    w.cell(s.t[n]).cell(s.mass[n]).cell(s.energy[n]).cell(s.weighted_norm[n]).cell(s.boundary_flux[n]).cell(
        s.energy_flux[n]);
    w.end_row();
  }
  w.close();
}

// Physical values at the basis nodes.
void write_snapshot(const fs::path& path, const Field& u, const EigenBasis& basis, const XGrid& grid) {
  CsvWriter w(path, {"x", "y", "u"});
  const auto nodes = basis.nodes();
  const Eigen::MatrixXd& syn = basis.synthesis_matrix();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      double v = 0.0;
      for (std::size_t l = 0; l < u.modes(); ++l)
        v += syn(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * u(l, i);
      w.cell(grid.x(i)).cell(nodes[j]).cell(v);
      w.end_row();
    }
  }
  w.close();
}

void write_run(Outputs& out, const RunResult& r, const ZkSolver& solver) {
  write_series(out.path("series.csv"), r.series);
  for (const Snapshot& s : r.snapshots)
    write_snapshot(out.path("snapshot_" + format_double(s.t) + ".csv"), s.u, solver.basis(), solver.grid());
}

void add_thresholds(Report& rep, const SolverConfig& cfg) {
  if (cfg.boundary_case != BoundaryCase::DirichletDirichlet && cfg.boundary_case != BoundaryCase::DirichletNeumann) {
    rep.add("L0", std::string("n/a"));
    rep.add("alpha0", std::string("n/a"));
    rep.add("beta", std::string("n/a"));
    return;
  }
  const DecayThresholds th = decay_thresholds(cfg.b, cfg.L, cfg.boundary_case);
  rep.add("L0", th.L0);
  rep.add("alpha0", th.alpha0);
  rep.add("beta", th.beta);
}

int finish_run(Outputs& out, const RunResult& r, int code_if_complete, std::ostream& log) {
  if (r.blew_up) {
    std::ostringstream m;
    m << "blow-up at t=" << format_double(r.blow_up_time) << ": " << r.message;
    log << m.str() << "\n";
    out.manifest("incomplete", kExitBlowUp, m.str());
    return kExitBlowUp;
  }
  out.manifest("complete", code_if_complete);
  return code_if_complete;
}

int simulate(const ExperimentSpec& spec, Outputs& out, std::ostream& log) {
  const Config& c = spec.config;
  const SolverConfig cfg = solver_config(c);
  const ProblemData data = problem_data(c, cfg);
  const ZkSolver solver(cfg, data);
  const RunResult r = solver.run();
  write_run(out, r, solver);

  Report rep;
  rep.add("steps", static_cast<double>(r.steps));
  rep.add("final_time", r.final_time);
  const Series& s = r.series;
  rep.add("mass_initial", s.size() ? s.mass.front() : 0.0);
  rep.add("mass_final", s.size() ? s.mass.back() : 0.0);
  rep.add("energy_initial", s.size() ? s.energy.front() : 0.0);
  rep.add("energy_final", s.size() ? s.energy.back() : 0.0);
  bool ok = true;
  if (data.homogeneous() && !r.blew_up) {
    const ConservationResiduals cr = conservation_residuals(s, true);
    const double mt = c.real("check.mass_tol"), et = c.real("check.energy_tol");
    rep.add("residual_mass", cr.mass);
    rep.add("residual_energy", cr.energy);
    rep.add_flag("mass_budget_ok", cr.mass <= mt);
    rep.add_flag("energy_budget_ok", cr.energy <= et);
    ok = cr.mass <= mt && cr.energy <= et;
  } else {
    rep.add("residual_mass", std::string("n/a"));
    rep.add("residual_energy", std::string("n/a"));
  }
  if (cfg.record_profiles && !r.profiles.t.empty()) {
    rep.add("lambda_plus", cfg.X_max >= 1.0 ? lambda_plus(r.profiles, solver.grid()) : std::nan(""));
    const double rr = std::min(c.real("diagnostics.smoothing_r"), cfg.X_max);
    rep.add("local_smoothing", local_smoothing(r.profiles, solver.grid(), rr));
  }
  add_thresholds(rep, cfg);
  const AdmissibilityCertificate cert = check_admissible(cfg.weight, cfg.X_max);
  rep.add_flag("weight_admissible", cert.pass);
  rep.add("right_leak", r.right_leak);
  rep.add_flag("leak_ok", r.leak_ok);
  if (c.boolean("check.strict_leak")) ok = ok && r.leak_ok;
  rep.add_flag("blew_up", r.blew_up);
  rep.add("verdict", std::string(r.blew_up ? "blow-up" : ok ? "pass" : "tolerance exceeded"));
  rep.write(out.path("report.csv"));
  if (!r.leak_ok) log << "warning: right-edge leak " << format_double(r.right_leak) << " above solver.leak_tolerance\n";
  return finish_run(out, r, ok ? kExitOk : kExitTolerance, log);
}

double rel_l2(const Field& a, const Field& ref, std::size_t skip) {
  double e = 0.0, n = 0.0;
  for (std::size_t l = 0; l < a.modes(); ++l)
    for (std::size_t i = skip; i < a.points(); ++i) {
      e += std::pow(a(l, i) - ref(l, i), 2);
      n += ref(l, i) * ref(l, i);
    }
  return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
}

int linear_check(const ExperimentSpec& spec, Outputs& out, std::ostream& log) {
  const Config& c = spec.config;
  SolverConfig cfg = solver_config(c);
  if (cfg.nonlinearity != Nonlinearity::Off) log << "note: linear-check runs with solver.nonlinearity = off\n";
  cfg.nonlinearity = Nonlinearity::Off;
  const ProblemData data = problem_data(c, cfg);
  const ZkSolver solver(cfg, data);
  const RunResult r = solver.run();
  write_run(out, r, solver);
  if (r.blew_up) return finish_run(out, r, kExitOk, log);

  SuperpositionInput in;
  in.basis = &solver.basis();
  in.grid = solver.grid();
  in.b = cfg.b;
  in.times = TimeGrid{cfg.steps() + 1, cfg.dt};
  in.x_ext = c.real("linear.x_ext");
  in.time_pad = c.real("linear.time_pad");
  in.u0 = solver.initial_state();
  if (data.forcing) {
    in.forcing = [&](double t) {
      Field f(cfg.l_max, cfg.N_x);
      data.forcing(t, f);
      return f;
    };
  }
  if (data.boundary) {
    in.mu = [&](double t) {
      std::vector<double> m(cfg.l_max);
      data.boundary(t, m);
      return m;
    };
  }
  in.output_steps = {cfg.steps()};
  const SuperpositionResult oracle = solve_linear_superposition(in);

  const std::size_t skip = c.count("linear.skip_cells");
  const double tol = c.real("linear.tolerance");
  const double rel = rel_l2(r.final_state, oracle.fields[0], skip);
  Report rep;
  rep.add("final_time", r.final_time);
  rep.add("rel_l2", rel);
  rep.add("rel_l2_all_x", rel_l2(r.final_state, oracle.fields[0], 0));
  rep.add("tolerance", tol);
  rep.add("skip_cells", static_cast<double>(skip));
  rep.add("right_leak", r.right_leak);
  rep.add("verdict", std::string(rel <= tol ? "pass" : "tolerance exceeded"));
  rep.write(out.path("report.csv"));
  write_snapshot(out.path("oracle_" + format_double(r.final_time) + ".csv"), oracle.fields[0], solver.basis(),
                 solver.grid());
  log << "linear-check: rel_l2 = " << format_double(rel) << " (tolerance " << format_double(tol) << ")\n";
  return finish_run(out, r, rel <= tol ? kExitOk : kExitTolerance, log);
}

int potential(const ExperimentSpec& spec, Outputs& out, std::ostream& log) {
  const Config& c = spec.config;
  const SolverConfig cfg = solver_config(c);
  const EigenBasis basis = build_basis(cfg.boundary_case, cfg.L, cfg.l_max);
  const BoundarySpec bs = boundary_spec(c);
  if (bs.kind != BoundaryKind::Zero && bs.mode >= basis.size()) throw ConfigError("key 'boundary.mode': exceeds solver.l_max");
  const auto mu = make_boundary(bs, basis.size());
  const TimeGrid g{cfg.steps() + 1, cfg.dt};
  const std::vector<double> xs = c.reals("potential.x");
  for (double x : xs)
    if (x < 0.0) throw ConfigError("key 'potential.x': stations must be non-negative");
  const std::size_t every = std::max<std::size_t>(1, c.count("potential.every"));

  Field m(basis.size(), g.count);
  if (mu) {
    std::vector<double> v(basis.size());
    for (std::size_t n = 0; n < g.count; ++n) {
      mu(g.t(n), v);
      for (std::size_t l = 0; l < basis.size(); ++l) m(l, n) = v[l];
    }
  }
  const ModalSpectrum s = transform_mu(BoundaryData(g, m));
  const BoundaryPotential pot(s, basis, cfg.b);

  CsvWriter w(out.path("potential.csv"), {"x", "t", "mode", "J"});
  for (double x : xs) {
    const Field j = pot.eval(x);
    for (std::size_t n = 0; n < g.count; n += every)
      for (std::size_t l = 0; l < basis.size(); ++l) {
        w.cell(x).cell(g.t(n)).cell(static_cast<long long>(l + 1)).cell(j(l, n));
        w.end_row();
      }
  }
  w.close();

  const Field j0 = pot.eval(0.0);
  double err = 0.0, ref = 0.0;
  for (std::size_t l = 0; l < basis.size(); ++l)
    for (std::size_t n = 0; n < g.count; ++n) {
      err = std::max(err, std::abs(j0(l, n) - m(l, n)));
      ref = std::max(ref, std::abs(m(l, n)));
    }
  const double trace = ref > 0.0 ? err / ref : err;
  const double dx = c.real("potential.residual_dx");
  const auto pts = static_cast<std::size_t>(std::llround(1.0 / dx)) + 1;
  const JResidual coarse = residual_J(s, 0.5, dx, pts, basis, cfg.b);
  const JResidual fine = residual_J(s, 0.5, dx / 2, 2 * pts - 1, basis, cfg.b);

  Report rep;
  rep.add("trace_rel_error", trace);
  rep.add("residual_dx", coarse.relative);
  rep.add("residual_dx_half", fine.relative);
  rep.add("residual_ratio", fine.absolute > 0.0 ? coarse.absolute / fine.absolute : std::nan(""));
  rep.add("window_length", static_cast<double>(window_length(g)));
  const bool ok = trace <= 1e-10;
  rep.add("verdict", std::string(ok ? "pass" : "trace identity violated"));
  rep.write(out.path("report.csv"));
  log << "potential: trace error " << format_double(trace) << "\n";
  out.manifest("complete", ok ? kExitOk : kExitTolerance);
  return ok ? kExitOk : kExitTolerance;
}

int decay_study(const ExperimentSpec& spec, Outputs& out, std::ostream& log) {
  const Config& c = spec.config;
  SolverConfig cfg = solver_config(c);
  const DecayThresholds th = decay_thresholds(cfg.b, cfg.L, cfg.boundary_case);
  double alpha = c.real("decay.alpha");
  if (alpha == 0.0) alpha = 0.5 * th.alpha0;
  if (!(alpha > 0.0)) throw ConfigError("key 'decay.alpha': must be positive");

  Report rep;
  rep.add("L0", th.L0);
  rep.add("alpha0", th.alpha0);
  rep.add("beta", th.beta);
  rep.add("alpha", alpha);
  const bool in_regime = cfg.L < th.L0 && alpha <= th.alpha0;
  if (!in_regime) {
    rep.add("verdict", std::string("outside decay regime"));
    rep.write(out.path("report.csv"));
    log << "decay-study: outside decay regime (L = " << format_double(cfg.L) << ", L0 = " << format_double(th.L0)
        << ", alpha = " << format_double(alpha) << ", alpha0 = " << format_double(th.alpha0) << ")\n";
    out.manifest("complete", kExitOk);
    return kExitOk;
  }

  cfg.weight = Weight(WeightKind::Exponential, alpha);
  cfg.record_weighted_terms = true;
  const ProblemData data = problem_data(c, cfg);
  const ZkSolver solver(cfg, data);
  const RunResult r = solver.run();
  write_run(out, r, solver);
  if (r.blew_up) {
    rep.add("verdict", std::string("blow-up"));
    rep.write(out.path("report.csv"));
    return finish_run(out, r, kExitOk, log);
  }

  const double u0_norm = std::sqrt(solver.measure().mass(solver.initial_state()));
  const double c_fit = fit_cubic_constant(r.weighted_terms, u0_norm, false);
  const double eps0 = eps0_bound(th.c0, c_fit, cfg.L);
  const double ab = alpha * th.beta;
  const DecayFit fit = fit_decay(r.series.weighted_norm, r.series.t, ab, c.real("decay.tolerance"));
  rep.add("u0_norm", u0_norm);
  rep.add("c_fit", c_fit);
  rep.add("eps0", eps0);
  rep.add("alpha_beta", ab);
  rep.add("fitted_rate", fit.rate);
  rep.add("worst_increase", fit.worst_increase);
  rep.add_flag("monotone", fit.monotone);
  if (!fit.warning.empty()) rep.add("warning", fit.warning);
  std::string verdict;
  int code = kExitOk;
  if (u0_norm > eps0) {
    verdict = "data above fitted eps0";
  } else if (fit.monotone) {
    verdict = "decay bound holds";
  } else {
    verdict = "decay bound violated";
    code = kExitTolerance;
  }
  rep.add("verdict", verdict);
  rep.write(out.path("report.csv"));
  log << "decay-study: " << verdict << " (rate " << format_double(fit.rate) << " vs alpha*beta "
      << format_double(ab) << ")\n";
  return finish_run(out, r, code, log);
}

int invariants(const ExperimentSpec& spec, Outputs& out, std::ostream& log) {
  std::vector<int> ids;
  for (long long id : spec.config.integers("invariants.criteria")) {
    if (id < 1 || id > kCriterionCount) throw ConfigError("key 'invariants.criteria': ids are 1.." + std::to_string(kCriterionCount));
    ids.push_back(static_cast<int>(id));
  }
  CsvWriter w(out.path("report.csv"), {"criterion", "title", "pass", "detail"});
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, &log);
    log << format_result(r) << "\n";
    w.cell(static_cast<long long>(id)).cell(quote(r.title)).cell(std::string_view(r.pass ? "true" : "false")).cell(quote(r.detail));
    w.end_row();
    all = all && r.pass;
  }
  w.close();
  out.manifest("complete", all ? kExitOk : kExitTolerance);
  return all ? kExitOk : kExitTolerance;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  // Configuration is checked in full before any output exists. The
  // invariants suite carries its own settings.
  if (spec.subcommand != Subcommand::Invariants) {
    spec.config.require_complete();
    const SolverConfig cfg = solver_config(spec.config);
    problem_data(spec.config, cfg);
    if (spec.subcommand == Subcommand::DecayStudy && cfg.boundary_case != BoundaryCase::DirichletDirichlet &&
        cfg.boundary_case != BoundaryCase::DirichletNeumann)
      throw ConfigError("decay-study applies to solver.case a and c only");
  }
  Outputs out(spec.out, spec);
  try {
    switch (spec.subcommand) {
      case Subcommand::Simulate: return simulate(spec, out, log);
      case Subcommand::LinearCheck: return linear_check(spec, out, log);
      case Subcommand::Potential: return potential(spec, out, log);
      case Subcommand::DecayStudy: return decay_study(spec, out, log);
      case Subcommand::Invariants: return invariants(spec, out, log);
    }
  } catch (const BlowUpError& e) {
    out.manifest("incomplete", kExitBlowUp, e.what());
    throw;
  } catch (const ConfigError& e) {
    out.manifest("failed", kExitConfig, e.what());
    throw;
  } catch (const std::exception& e) {
    out.manifest("failed", kExitTolerance, e.what());
    throw;
  }
  return kExitOk;
}

}  // namespace zk
