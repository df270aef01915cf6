#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zk/data_sources.hpp"

namespace zk {

enum class ValueType { Real, Integer, Boolean, Choice, RealList, IntegerList, ModeList };

struct KeySpec {
  std::string_view key;         // namespaced, e.g. "solver.N_x"
  ValueType type;
  std::string_view fallback;    // default; empty with required = true means no default
  bool required = false;
  std::string_view choices{};   // '|'-separated for Choice
  std::string_view help{};
};

/// Every accepted key, sorted by name.
std::span<const KeySpec> config_schema();
const KeySpec* find_key(std::string_view key);

/// Flat key=value configuration. Files may group keys under [section]
/// headers, so "[solver]\nN_x = 512" and "solver.N_x = 512" are the same.
/// Mode indices in values are 1-based.
class Config {
 public:
  Config() = default;

  /// Parses text; origin names the source in error messages.
  static Config parse(std::string_view text, std::string_view origin = "<text>");
  static Config load(const std::filesystem::path& path);

  /// Type-checked assignment. Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  /// "key=value" form used by --set.
  void assign(std::string_view assignment);

  bool has(std::string_view key) const;
  /// Throws ConfigError naming the first missing required key.
  void require_complete() const;

  double real(std::string_view key) const;
  long long integer(std::string_view key) const;
  std::size_t count(std::string_view key) const;  // non-negative integer
  bool boolean(std::string_view key) const;
  std::string text(std::string_view key) const;
  std::vector<double> reals(std::string_view key) const;
  std::vector<long long> integers(std::string_view key) const;
  /// Zero-based (mode, coefficient) pairs from "1:1.0, 3:0.5".
  ModeProfile modes(std::string_view key) const;

  /// Every schema key with its value or default, one "key = value" per line.
  std::string render() const;
  std::uint64_t hash() const;

  const std::map<std::string, std::string, std::less<>>& explicit_values() const noexcept { return values_; }

 private:
  std::string raw(std::string_view key) const;

  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace zk
