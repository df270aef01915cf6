#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "zk/config.hpp"
#include "zk/csv.hpp"
#include "zk/error.hpp"
#include "zk/experiment.hpp"

using namespace zk;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("schema is sorted and every default passes its own check") {
  const auto schema = config_schema();
  REQUIRE(schema.size() > 10);
  for (std::size_t i = 1; i < schema.size(); ++i) CHECK(schema[i - 1].key < schema[i].key);
  for (const KeySpec& k : schema) {
    CHECK(find_key(k.key) == &k);
    if (k.required) continue;
    Config c;
    CHECK_NOTHROW(c.set(k.key, k.fallback));
  }
  CHECK(find_key("solver.caze") == nullptr);
  CHECK(find_key("") == nullptr);
}

TEST_CASE("sections and dotted keys are equivalent") {
  const Config a = Config::parse("[solver]\ncase = c\nN_x = 128  # grid\n; note\n\n[initial]\nkind = gaussian\n");
  const Config b = Config::parse("solver.case=c\nsolver.N_x=128\ninitial.kind=gaussian\n");
  CHECK(a.render() == b.render());
  CHECK(a.hash() == b.hash());
  CHECK(a.count("solver.N_x") == 128);
  CHECK(a.text("solver.case") == "c");
  CHECK(a.text("initial.kind") == "gaussian");
}

TEST_CASE("defaults fill unset keys") {
  Config c;
  c.set("solver.case", "a");
  CHECK(c.real("solver.L") == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(c.count("solver.N_x") == 256);
  CHECK(c.boolean("solver.dealias"));
  CHECK(c.text("solver.scheme") == "imex");
  CHECK(c.reals("potential.x") == std::vector<double>{0, 0.5, 1, 2, 4});
  CHECK(c.integers("invariants.criteria").size() == 9);
  CHECK_FALSE(c.has("solver.N_x"));
  CHECK(c.has("solver.case"));
}

TEST_CASE("errors name the key and the line") {
  CHECK(message_of([] { Config::parse("solver.caze = a\n", "run.cfg"); }) == "run.cfg:1: unknown key 'solver.caze'");
  CHECK(message_of([] { Config::parse("\n[solver]\ncase = e\n", "run.cfg"); }).find("run.cfg:3") == 0);
  CHECK(message_of([] { Config::parse("solver.N_x = 1\nsolver.N_x = 2\n"); }).find("given twice") !=
        std::string::npos);
  CHECK(message_of([] { Config::parse("[solver\n"); }).find("malformed section") != std::string::npos);
  CHECK(message_of([] { Config::parse("solver.N_x\n"); }).find("expected key = value") != std::string::npos);

  Config c;
  CHECK(message_of([&] { c.set("solver.N_x", "12.5"); }) == "key 'solver.N_x': expected an integer, got '12.5'");
  CHECK(message_of([&] { c.set("solver.dt", "nan"); }).find("finite real") != std::string::npos);
  CHECK(message_of([&] { c.set("solver.dealias", "maybe"); }).find("true or false") != std::string::npos);
  CHECK(message_of([&] { c.set("initial.modes", "0:1"); }).find("modes >= 1") != std::string::npos);
  CHECK(message_of([&] { c.set("potential.x", "0, a"); }).find("list of reals") != std::string::npos);
  CHECK(message_of([&] { c.assign("solver.N_x"); }).find("key=value") != std::string::npos);
  CHECK(message_of([&] { c.require_complete(); }) == "missing required key 'solver.case'");
  CHECK(message_of([&] { c.text("solver.case"); }) == "missing required key 'solver.case'");
  CHECK_THROWS_AS(Config::load("/nonexistent/zk.cfg"), ConfigError);
}

TEST_CASE("value normalisation") {
  Config c;
  c.set("solver.case", " B ");
  CHECK(c.text("solver.case") == "b");
  c.set("solver.truncate", "Yes");
  CHECK(c.text("solver.truncate") == "true");
  c.assign("solver.N_x = +64");
  CHECK(c.count("solver.N_x") == 64);
  c.set("solver.series_every", "-1");
  CHECK_THROWS_AS(c.count("solver.series_every"), ConfigError);
}

TEST_CASE("later assignments override earlier ones") {
  Config c = Config::parse("solver.case = a\nsolver.T = 1\n");
  c.assign("solver.T=0.25");
  CHECK(c.real("solver.T") == 0.25);
  CHECK(c.render().find("solver.T = 0.25\n") != std::string::npos);
  const auto h = c.hash();
  c.assign("solver.T=0.5");
  CHECK(c.hash() != h);
}

TEST_CASE("modes are one-based in text and zero-based in use") {
  Config c;
  c.set("initial.modes", "1:1, 3:-0.5");
  const ModeProfile m = c.modes("initial.modes");
  REQUIRE(m.size() == 2);
  CHECK(m[0] == std::make_pair(std::size_t{0}, 1.0));
  CHECK(m[1] == std::make_pair(std::size_t{2}, -0.5));

  c.set("solver.case", "a");
  c.set("boundary.kind", "sine");
  c.set("boundary.mode", "2");
  CHECK(boundary_spec(c).mode == 1);
  c.set("boundary.mode", "0");
  CHECK_THROWS_AS(boundary_spec(c), ConfigError);
  c.set("boundary.mode", "17");
  CHECK(message_of([&] { problem_data(c, solver_config(c)); }).find("boundary.mode") != std::string::npos);
}

TEST_CASE("solver_config maps every solver key") {
  const Config c = Config::parse(
      "[solver]\ncase = d\nL = 2\nX_max = 30\nN_x = 300\nl_max = 9\nb = 0.5\nT = 3\ndt = 0.01\n"
      "scheme = imex\nnonlinearity = saturated\nh = 0.5\ntruncate = true\ndealias = false\n"
      "series_every = 3\nsnapshot_every = 7\nleak_tolerance = 1e-6\n"
      "[weight]\nkind = power\nalpha = 1.5\n[diagnostics]\nprofiles = false\n");
  const SolverConfig s = solver_config(c);
  CHECK(s.boundary_case == BoundaryCase::Periodic);
  CHECK(s.L == 2);
  CHECK(s.X_max == 30);
  CHECK(s.N_x == 300);
  CHECK(s.l_max == 9);
  CHECK(s.b == 0.5);
  CHECK(s.T == 3);
  CHECK(s.dt == 0.01);
  CHECK(s.scheme == TimeScheme::Imex);
  CHECK(s.nonlinearity == Nonlinearity::Saturated);
  CHECK(s.h == 0.5);
  CHECK(s.truncate);
  CHECK_FALSE(s.dealias);
  CHECK(s.series_every == 3);
  CHECK(s.snapshot_every == 7);
  CHECK(s.leak_tolerance == 1e-6);
  CHECK(s.weight.kind() == WeightKind::Power);
  CHECK(s.weight.alpha() == 1.5);
  CHECK_FALSE(s.record_profiles);
}

TEST_CASE("format_double round-trips and is shortest") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-8) == "1e-08");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(mant(rng), ex(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("csv writer checks row widths") {
  const auto dir = std::filesystem::temp_directory_path() / "zk_test_config";
  std::filesystem::create_directories(dir);
  const auto path = dir / "t.csv";
  {
    CsvWriter w(path, {"a", "b", "c"});
    w.cell(1.5).cell(std::string_view("x")).cell(7LL);
    w.end_row();
    w.cell(0.25);
    CHECK_THROWS_AS(w.end_row(), ShapeError);
  }
  CHECK(slurp(path).rfind("a,b,c\n1.5,x,7\n", 0) == 0);
  CHECK(quote("plain") == "plain");
  CHECK(quote("a,b") == "\"a,b\"");
  CHECK(quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::filesystem::remove_all(dir);
}

TEST_CASE("subcommand names") {
  for (Subcommand s : {Subcommand::Simulate, Subcommand::LinearCheck, Subcommand::Potential, Subcommand::DecayStudy,
                       Subcommand::Invariants})
    CHECK(parse_subcommand(subcommand_name(s)) == s);
  CHECK_THROWS_AS(parse_subcommand("simulat"), ConfigError);
}

TEST_CASE("configuration errors leave no output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "zk_test_config_run";
  std::filesystem::remove_all(dir);
  ExperimentSpec spec;
  spec.out = dir;
  spec.config.set("solver.case", "b");
  spec.subcommand = Subcommand::DecayStudy;
  std::ostringstream log;
  CHECK_THROWS_AS(run_experiment(spec, log), ConfigError);
  CHECK_FALSE(std::filesystem::exists(dir));
}
