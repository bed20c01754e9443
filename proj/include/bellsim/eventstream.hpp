#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "bellsim/core_types.hpp"
#include "bellsim/montecarlo.hpp"

namespace bellsim {

// One detector click. File order is (t_ns, arm, channel); the reader and
// writer both enforce it.
struct EventRecord {
  std::uint64_t t_ns = 0;
  int arm = 1;  // 1 or 2
  std::uint32_t setting_id = 0;
  Outcome channel = Outcome::Plus;

  bool operator==(const EventRecord&) const = default;
};

bool event_order_leq(const EventRecord& a, const EventRecord& b);

// Per-arm map from setting_id to polarizer angle.
struct SettingsTable {
  std::map<std::uint32_t, Angle> arm1;
  std::map<std::uint32_t, Angle> arm2;
};

struct CoincidenceConfig {
  std::uint64_t window_ns = 1;
  SettingsTable settings;
};

// CSV format: header "t_ns,arm,setting_id,channel", then one
// "<uint>,<1|2>,<uint>,<+|->" line per record, newline terminated, no
// trailing whitespace. Returns the byte count written.
std::uint64_t write_events(const std::vector<EventRecord>& records, std::ostream& out);
std::uint64_t write_events_file(const std::vector<EventRecord>& records,
                                const std::filesystem::path& path);

// Strict parse; any malformed or out-of-order line raises ValidationError
// naming the 1-based physical line.
std::vector<EventRecord> read_events(std::istream& in);
std::vector<EventRecord> read_events_file(const std::filesystem::path& path);

struct MatchedPair {
  EventRecord arm1;
  EventRecord arm2;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::uint64_t unmatched_arm1 = 0;
  std::uint64_t unmatched_arm2 = 0;
};

// Greedy nearest-neighbor coincidence matching. Arm-1 events are visited in
// time order; each takes the nearest unconsumed arm-2 event within
// window_ns, equidistant candidates resolving to the earlier one. Every
// event is used at most once.
MatchResult match_coincidences(const std::vector<EventRecord>& arm1_events,
                               const std::vector<EventRecord>& arm2_events,
                               const CoincidenceConfig& cfg);

using SettingsPairKey = std::pair<std::uint32_t, std::uint32_t>;
using TallyMap = std::map<SettingsPairKey, RunTally>;

// Four-way counts per (arm1 setting, arm2 setting). Ids missing from the
// settings table raise ValidationError.
TallyMap tally_matches(const MatchResult& matches, const CoincidenceConfig& cfg);

// Synthetic timestamps for simulator output: pair k is stamped at
// t0 + k * dt on both arms, which makes ingestion lossless.
std::vector<EventRecord> synthetic_pair_events(const std::vector<OutcomePair>& pairs,
                                               std::uint32_t arm1_setting,
                                               std::uint32_t arm2_setting,
                                               std::uint64_t dt_ns, std::uint64_t t0_ns);

}  // namespace bellsim
