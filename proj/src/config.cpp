#include "bellsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  // from_chars for doubles is strict about the whole-field match
  double value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("bad numeric value '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("bad unsigned value '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const std::size_t hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(source + " line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key{trim(body.substr(0, eq))};
    const std::string value{trim(body.substr(eq + 1))};
    if (key.empty()) {
      throw ValidationError(source + " line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_.emplace_back(key, value);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse(in, path.string());
}

bool KeyValueConfig::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  // last assignment wins
  std::optional<std::string> found;
  for (const auto& [k, v] : entries_) {
    if (k == key) found = v;
  }
  return found;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) throw ValidationError(source_ + ": missing key '" + std::string(key) + "'");
  return parse_double(*v, key);
}

std::uint64_t KeyValueConfig::get_uint(std::string_view key) const {
  const auto v = get(key);
  if (!v) throw ValidationError(source_ + ": missing key '" + std::string(key) + "'");
  return parse_uint(*v, key);
}

std::vector<double> KeyValueConfig::get_doubles(std::string_view key) const {
  const auto v = get(key);
  if (!v) throw ValidationError(source_ + ": missing key '" + std::string(key) + "'");
  std::vector<double> values;
  std::istringstream stream(*v);
  std::string token;
  while (stream >> token) {
    values.push_back(parse_double(token, key));
  }
  return values;
}

SettingsTable KeyValueConfig::settings_table() const {
  SettingsTable table;
  for (const auto& [key, value] : entries_) {
    std::map<std::uint32_t, Angle>* arm = nullptr;
    std::string_view rest;
    if (key.rfind("arm1.", 0) == 0) {
      arm = &table.arm1;
      rest = std::string_view(key).substr(5);
    } else if (key.rfind("arm2.", 0) == 0) {
      arm = &table.arm2;
      rest = std::string_view(key).substr(5);
    } else {
      continue;
    }
    const auto id = static_cast<std::uint32_t>(parse_uint(rest, key));
    const double deg = parse_double(value, key);
    if (!arm->emplace(id, Angle::from_degrees(deg)).second) {
      throw ValidationError(source_ + ": duplicate setting id in '" + key + "'");
    }
  }
  return table;
}

}  // namespace bellsim
