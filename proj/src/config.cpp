#include "zk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zk/csv.hpp"
#include "zk/error.hpp"

namespace zk {
namespace {

using VT = ValueType;

// Sorted by key; find_key relies on it.
constexpr KeySpec kSchema[] = {
    {"boundary.amplitude", VT::Real, "0", false, {}, "amplitude of mu"},
    {"boundary.kind", VT::Choice, "zero", false, "zero|sine", "boundary data family"},
    {"boundary.mode", VT::Integer, "1", false, {}, "y-mode carrying mu (1-based)"},
    {"boundary.omega", VT::Real, "1", false, {}, "angular frequency of mu"},
    {"boundary.ramp", VT::Real, "0.5", false, {}, "smooth start-up time of mu"},
    {"check.energy_tol", VT::Real, "5e-3", false, {}, "energy budget tolerance (relative)"},
    {"check.mass_tol", VT::Real, "1e-3", false, {}, "mass budget tolerance (relative)"},
    {"check.strict_leak", VT::Boolean, "false", false, {}, "treat a right-edge leak as a tolerance failure"},
    {"decay.alpha", VT::Real, "0", false, {}, "weight exponent; 0 selects alpha0 / 2"},
    {"decay.tolerance", VT::Real, "0.01", false, {}, "allowed relative increase of e^{alpha beta t} series"},
    {"diagnostics.profiles", VT::Boolean, "true", false, {}, "record x-profiles for lambda+ and smoothing"},
    {"diagnostics.smoothing_r", VT::Real, "1", false, {}, "r of the local smoothing integral"},
    {"forcing.amplitude", VT::Real, "0", false, {}, "amplitude of f"},
    {"forcing.kind", VT::Choice, "zero", false, "zero|gaussian", "forcing family"},
    {"forcing.mode", VT::Integer, "1", false, {}, "y-mode carrying f (1-based)"},
    {"forcing.omega", VT::Real, "0", false, {}, "angular frequency of f"},
    {"forcing.ramp", VT::Real, "0.5", false, {}, "smooth start-up time of f"},
    {"forcing.width", VT::Real, "1", false, {}, "x-width of f"},
    {"forcing.x0", VT::Real, "5", false, {}, "x-centre of f"},
    {"initial.amplitude", VT::Real, "1", false, {}, "peak envelope amplitude"},
    {"initial.kind", VT::Choice, "zero", false, "zero|gaussian|random", "initial data family"},
    {"initial.modes", VT::ModeList, "1:1", false, {}, "y-profile as mode:coefficient pairs (1-based)"},
    {"initial.norm", VT::Real, "0", false, {}, "rescale u0 to this L2 norm when positive"},
    {"initial.random_modes", VT::Integer, "4", false, {}, "modes with random coefficients"},
    {"initial.seed", VT::Integer, "1", false, {}, "seed of the random family"},
    {"initial.width", VT::Real, "1.5", false, {}, "x-width of the envelope"},
    {"initial.x0", VT::Real, "7", false, {}, "x-centre of the envelope"},
    {"invariants.criteria", VT::IntegerList, "1,2,3,4,5,6,7,8,9", false, {}, "acceptance criteria to run"},
    {"linear.skip_cells", VT::Integer, "2", false, {}, "grid cells next to x = 0 left out of the comparison"},
    {"linear.time_pad", VT::Real, "20", false, {}, "time window period of J in units of T"},
    {"linear.tolerance", VT::Real, "0.01", false, {}, "relative L2 tolerance"},
    {"linear.x_ext", VT::Real, "150", false, {}, "extension length of the whole-strip grid"},
    {"potential.every", VT::Integer, "10", false, {}, "time-sample stride of the J table"},
    {"potential.residual_dx", VT::Real, "0.05", false, {}, "station spacing of the residual check"},
    {"potential.x", VT::RealList, "0,0.5,1,2,4", false, {}, "x stations of the J table"},
    {"solver.L", VT::Real, "3.141592653589793", false, {}, "strip width"},
    {"solver.N_x", VT::Integer, "256", false, {}, "x grid points"},
    {"solver.T", VT::Real, "1", false, {}, "horizon"},
    {"solver.X_max", VT::Real, "40", false, {}, "truncation length in x"},
    {"solver.b", VT::Real, "0", false, {}, "drift coefficient"},
    {"solver.case", VT::Choice, "", true, "a|b|c|d", "y-boundary case"},
    {"solver.dealias", VT::Boolean, "true", false, {}, "exact-projection nodes for the nonlinear product"},
    {"solver.dt", VT::Real, "0.002", false, {}, "time step"},
    {"solver.h", VT::Real, "1", false, {}, "saturation parameter in (0, 1]"},
    {"solver.l_max", VT::Integer, "16", false, {}, "y-modes"},
    {"solver.leak_tolerance", VT::Real, "1e-8", false, {}, "allowed right-edge column norm ratio"},
    {"solver.nonlinearity", VT::Choice, "full", false, "full|saturated|off", "nonlinear term"},
    {"solver.scheme", VT::Choice, "imex", false, "imex|rk4", "time integrator"},
    {"solver.series_every", VT::Integer, "1", false, {}, "steps between series samples"},
    {"solver.snapshot_every", VT::Integer, "0", false, {}, "steps between snapshots; 0 for none"},
    {"solver.truncate", VT::Boolean, "false", false, {}, "multiply u0 and f by eta(1/h - x)"},
    {"weight.alpha", VT::Real, "0", false, {}, "weight parameter"},
    {"weight.kind", VT::Choice, "unit", false, "unit|exponential|power|arctan", "weight of the weighted norm"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void type_error(std::string_view key, std::string_view expected, std::string_view value) {
  throw ConfigError("key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                    std::string(value) + "'");
}

bool parse_real(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size() && std::isfinite(v);
}

bool parse_int(std::string_view s, long long& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

bool parse_bool(std::string_view s, bool& v) {
  const std::string t = lower(std::string(s));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return v = true, true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return v = false, true;
  return false;
}

ModeProfile parse_modes(std::string_view key, std::string_view s) {
  ModeProfile out;
  for (const std::string& item : split(s, ',')) {
    const auto colon = item.find(':');
    long long m = 0;
    double c = 0.0;
    if (colon == std::string::npos || !parse_int(trim(item.substr(0, colon)), m) || m < 1 ||
        !parse_real(trim(item.substr(colon + 1)), c)) {
      type_error(key, "mode:coefficient pairs with modes >= 1", s);
    }
    out.emplace_back(static_cast<std::size_t>(m - 1), c);
  }
  return out;
}

// Validates value against spec and returns the stored form.
std::string check_value(const KeySpec& spec, std::string_view value) {
  std::string v = trim(value);
  switch (spec.type) {
    case VT::Real: {
      double d;
      if (!parse_real(v, d)) type_error(spec.key, "a finite real number", v);
      return v;
    }
    case VT::Integer: {
      long long i;
      if (!parse_int(v, i)) type_error(spec.key, "an integer", v);
      return v;
    }
    case VT::Boolean: {
      bool b;
      if (!parse_bool(v, b)) type_error(spec.key, "true or false", v);
      return b ? "true" : "false";
    }
    case VT::Choice: {
      const std::string t = lower(v);
      for (const std::string& c : split(spec.choices, '|'))
        if (c == t) return t;
      type_error(spec.key, "one of " + std::string(spec.choices), v);
    }
    case VT::RealList:
      for (const std::string& item : split(v, ',')) {
        double d;
        if (!parse_real(item, d)) type_error(spec.key, "a comma-separated list of reals", v);
      }
      return v;
    case VT::IntegerList:
      for (const std::string& item : split(v, ',')) {
        long long i;
        if (!parse_int(item, i)) type_error(spec.key, "a comma-separated list of integers", v);
      }
      return v;
    case VT::ModeList:
      parse_modes(spec.key, v);
      return v;
  }
  return v;
}

}  // namespace

std::span<const KeySpec> config_schema() { return kSchema; }

const KeySpec* find_key(std::string_view key) {
  const auto it = std::lower_bound(std::begin(kSchema), std::end(kSchema), key,
                                   [](const KeySpec& s, std::string_view k) { return s.key < k; });
  return (it != std::end(kSchema) && it->key == key) ? &*it : nullptr;
}

Config Config::parse(std::string_view text, std::string_view origin) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": malformed section header '" + body + "'");
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value, got '" + body + "'");
    std::string key = trim(body.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    if (cfg.has(key)) throw ConfigError(where + ": key '" + key + "' given twice");
    try {
      cfg.set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(std::string_view key, std::string_view value) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  values_[std::string(key)] = check_value(*spec, value);
}

void Config::assign(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

void Config::require_complete() const {
  for (const KeySpec& s : kSchema)
    if (s.required && !has(s.key)) throw ConfigError("missing required key '" + std::string(s.key) + "'");
}

std::string Config::raw(std::string_view key) const {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (spec->required) throw ConfigError("missing required key '" + std::string(key) + "'");
  return std::string(spec->fallback);
}

double Config::real(std::string_view key) const {
  double v = 0.0;
  const std::string s = raw(key);
  if (!parse_real(s, v)) type_error(key, "a finite real number", s);
  return v;
}

long long Config::integer(std::string_view key) const {
  long long v = 0;
  const std::string s = raw(key);
  if (!parse_int(s, v)) type_error(key, "an integer", s);
  return v;
}

std::size_t Config::count(std::string_view key) const {
  const long long v = integer(key);
  if (v < 0) type_error(key, "a non-negative integer", std::to_string(v));
  return static_cast<std::size_t>(v);
}

bool Config::boolean(std::string_view key) const {
  bool v = false;
  const std::string s = raw(key);
  if (!parse_bool(s, v)) type_error(key, "true or false", s);
  return v;
}

std::string Config::text(std::string_view key) const { return raw(key); }

std::vector<double> Config::reals(std::string_view key) const {
  std::vector<double> out;
  const std::string s = raw(key);
  for (const std::string& item : split(s, ',')) {
    double v;
    if (!parse_real(item, v)) type_error(key, "a comma-separated list of reals", s);
    out.push_back(v);
  }
  return out;
}

std::vector<long long> Config::integers(std::string_view key) const {
  std::vector<long long> out;
  const std::string s = raw(key);
  for (const std::string& item : split(s, ',')) {
    long long v;
    if (!parse_int(item, v)) type_error(key, "a comma-separated list of integers", s);
    out.push_back(v);
  }
  return out;
}

ModeProfile Config::modes(std::string_view key) const { return parse_modes(key, raw(key)); }

std::string Config::render() const {
  std::string out;
  for (const KeySpec& s : kSchema) {
    const auto it = values_.find(s.key);
    if (it == values_.end() && s.required) continue;
    out += std::string(s.key) + " = " + (it != values_.end() ? it->second : std::string(s.fallback)) + "\n";
  }
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(render()); }

}  // namespace zk
