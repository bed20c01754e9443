#include "bellsim/eventstream.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

constexpr std::string_view kHeader = "t_ns,arm,setting_id,channel";

int channel_rank(Outcome o) { return o == Outcome::Plus ? 0 : 1; }

void require_sorted(const std::vector<EventRecord>& records, const char* what) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!event_order_leq(records[i - 1], records[i])) {
      throw ValidationError(std::string(what) + ": records out of order at index " +
                            std::to_string(i));
    }
  }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw ValidationError("malformed event file at line " + std::to_string(line_no) + ": " + why);
}

template <typename Int>
Int parse_uint_field(std::string_view field, std::size_t line_no, const char* name) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    bad_line(line_no, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

bool event_order_leq(const EventRecord& a, const EventRecord& b) {
  if (a.t_ns != b.t_ns) return a.t_ns < b.t_ns;
  if (a.arm != b.arm) return a.arm < b.arm;
  return channel_rank(a.channel) <= channel_rank(b.channel);
}

std::uint64_t write_events(const std::vector<EventRecord>& records, std::ostream& out) {
  require_sorted(records, "write_events");
  std::string buf;
  buf.reserve(records.size() * 16 + kHeader.size() + 1);
  buf.append(kHeader);
  buf.push_back('\n');
  for (const EventRecord& r : records) {
    buf.append(std::to_string(r.t_ns));
    buf.push_back(',');
    buf.push_back(r.arm == 1 ? '1' : '2');
    buf.push_back(',');
    buf.append(std::to_string(r.setting_id));
    buf.push_back(',');
    buf.push_back(r.channel == Outcome::Plus ? '+' : '-');
    buf.push_back('\n');
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write_events: stream write failed");
  return buf.size();
}

std::uint64_t write_events_file(const std::vector<EventRecord>& records,
                                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::uint64_t n = write_events(records, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
  return n;
}

std::vector<EventRecord> read_events(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw ValidationError("malformed event file at line 1: missing header");
  }
  if (line != kHeader) bad_line(1, "expected header '" + std::string(kHeader) + "'");

  std::vector<EventRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) bad_line(line_no, "empty line");

    EventRecord r;
    std::string_view rest = line;
    const auto take_field = [&](const char* name) {
      const std::size_t comma = rest.find(',');
      if (comma == std::string_view::npos) bad_line(line_no, std::string("missing field ") + name);
      const std::string_view field = rest.substr(0, comma);
      rest.remove_prefix(comma + 1);
      return field;
    };

    r.t_ns = parse_uint_field<std::uint64_t>(take_field("t_ns"), line_no, "t_ns");
    const std::string_view arm = take_field("arm");
    if (arm == "1") r.arm = 1;
    else if (arm == "2") r.arm = 2;
    else bad_line(line_no, "bad arm '" + std::string(arm) + "'");
    r.setting_id = parse_uint_field<std::uint32_t>(take_field("setting_id"), line_no, "setting_id");
    if (rest == "+") r.channel = Outcome::Plus;
    else if (rest == "-") r.channel = Outcome::Minus;
    else bad_line(line_no, "bad channel '" + std::string(rest) + "'");

    if (!records.empty() && !event_order_leq(records.back(), r)) {
      bad_line(line_no, "records out of order");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<EventRecord> read_events_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_events(in);
}

MatchResult match_coincidences(const std::vector<EventRecord>& arm1_events,
                               const std::vector<EventRecord>& arm2_events,
                               const CoincidenceConfig& cfg) {
  if (cfg.window_ns == 0) throw ValidationError("coincidence window must be positive");
  require_sorted(arm1_events, "match_coincidences arm1");
  require_sorted(arm2_events, "match_coincidences arm2");

  MatchResult result;
  std::vector<bool> consumed(arm2_events.size(), false);
  std::size_t frontier = 0;  // first arm-2 index still worth scanning

  for (const EventRecord& e1 : arm1_events) {
    while (frontier < arm2_events.size() &&
           (consumed[frontier] ||
            arm2_events[frontier].t_ns + cfg.window_ns < e1.t_ns)) {
      ++frontier;
    }
    std::size_t best = arm2_events.size();
    std::uint64_t best_dist = 0;
    for (std::size_t j = frontier; j < arm2_events.size(); ++j) {
      const std::uint64_t t2 = arm2_events[j].t_ns;
      if (t2 > e1.t_ns && t2 - e1.t_ns > cfg.window_ns) break;
      if (consumed[j]) continue;
      const std::uint64_t dist = t2 > e1.t_ns ? t2 - e1.t_ns : e1.t_ns - t2;
      if (dist > cfg.window_ns) continue;
      if (best == arm2_events.size() || dist < best_dist) {  // ties keep the earlier event
        best = j;
        best_dist = dist;
      }
    }
    if (best != arm2_events.size()) {
      consumed[best] = true;
      result.pairs.push_back({e1, arm2_events[best]});
    } else {
      ++result.unmatched_arm1;
    }
  }
  for (const bool c : consumed) {
    if (!c) ++result.unmatched_arm2;
  }
  return result;
}

TallyMap tally_matches(const MatchResult& matches, const CoincidenceConfig& cfg) {
  TallyMap tallies;
  for (const MatchedPair& p : matches.pairs) {
    if (!cfg.settings.arm1.count(p.arm1.setting_id)) {
      throw ValidationError("unknown arm-1 setting id " + std::to_string(p.arm1.setting_id));
    }
    if (!cfg.settings.arm2.count(p.arm2.setting_id)) {
      throw ValidationError("unknown arm-2 setting id " + std::to_string(p.arm2.setting_id));
    }
    tallies[{p.arm1.setting_id, p.arm2.setting_id}].add({p.arm1.channel, p.arm2.channel});
  }
  return tallies;
}

std::vector<EventRecord> synthetic_pair_events(const std::vector<OutcomePair>& pairs,
                                               std::uint32_t arm1_setting,
                                               std::uint32_t arm2_setting,
                                               std::uint64_t dt_ns, std::uint64_t t0_ns) {
  std::vector<EventRecord> records;
  records.reserve(pairs.size() * 2);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::uint64_t t = t0_ns + k * dt_ns;
    records.push_back({t, 1, arm1_setting, pairs[k].arm1});
    records.push_back({t, 2, arm2_setting, pairs[k].arm2});
  }
  return records;
}

}  // namespace bellsim
