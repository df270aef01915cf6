#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "zk/config.hpp"
#include "zk/error.hpp"
#include "zk/experiment.hpp"

namespace {

std::string key_listing() {
  std::string s = "configuration keys (name, default):\n";
  for (const zk::KeySpec& k : zk::config_schema()) {
    s += "  " + std::string(k.key);
    if (k.required) {
      s += " (required)";
    } else {
      s += " = " + std::string(k.fallback);
    }
    if (!k.choices.empty()) s += "  [" + std::string(k.choices) + "]";
    s += "\n";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zakharov-Kuznetsov half-strip solver"};
  app.require_subcommand(1);
  app.footer(key_listing());

  std::string config_path;
  std::vector<std::string> sets;
  std::string out = "zk_out";
  const std::pair<const char*, const char*> subs[] = {
      {"simulate", "run the solver and write series, snapshots and a report"},
      {"linear-check", "compare the linear solver against the superposition oracle"},
      {"potential", "tabulate the boundary potential J"},
      {"decay-study", "decay thresholds, fitted constants and decay rate (cases a, c)"},
      {"invariants", "run the acceptance criteria"},
  };
  for (const auto& [name, description] : subs) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config,-c", config_path, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set,-s", sets, "override, key=value (repeatable)");
    sub->add_option("--out,-o", out, "output directory")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? zk::kExitOk : zk::kExitConfig;
  }

  try {
    zk::ExperimentSpec spec;
    spec.subcommand = zk::parse_subcommand(app.get_subcommands().front()->get_name());
    if (!config_path.empty()) spec.config = zk::Config::load(config_path);
    for (const std::string& s : sets) spec.config.assign(s);
    spec.out = out;
    const int code = zk::run_experiment(spec, std::cerr);
    std::cout << "status " << code << " (" << out << ")\n";
    return code;
  } catch (const zk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return zk::kExitConfig;
  } catch (const zk::NotApplicableError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return zk::kExitConfig;
  } catch (const zk::BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return zk::kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return zk::kExitTolerance;
  }
}
