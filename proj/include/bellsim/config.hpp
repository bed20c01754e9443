#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellsim/eventstream.hpp"

namespace bellsim {

// Flat "key = value" document with '#' comments. Used both for CLI defaults
// (model, angles, seed, window_ns, ...) and for settings tables, whose keys
// are arm1.<id> / arm2.<id> with angles in degrees.
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "config");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key) const;          // throws ValidationError
  std::uint64_t get_uint(std::string_view key) const;     // throws ValidationError
  std::vector<double> get_doubles(std::string_view key) const;  // whitespace separated

  // Collect arm1.<id> / arm2.<id> keys into a per-arm settings table.
  // Duplicate ids on one arm are rejected.
  SettingsTable settings_table() const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string source_;
};

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

}  // namespace bellsim
