#include "bellsim/commands.hpp"

#include <algorithm>
#include <cmath>

#include "bellsim/chsh.hpp"
#include "bellsim/config.hpp"
#include "bellsim/errors.hpp"
#include "bellsim/eventstream.hpp"
#include "bellsim/models.hpp"
#include "bellsim/montecarlo.hpp"
#include "bellsim/quadrature.hpp"
#include "bellsim/version.hpp"

namespace bellsim {

namespace {

std::string num(double v) { return format_double(v, true); }

QuadratureRule resolve_rule(const Model& m, const std::optional<int>& nodes) {
  return QuadratureRule::midpoint(nodes.value_or(default_nodes(m)));
}

OutputDocument make_doc(std::string kind, const std::string& command) {
  OutputDocument doc;
  doc.kind = std::move(kind);
  doc.meta("command", command);
  doc.meta("version", kVersion);
  return doc;
}

std::string join_angles(const std::array<double, 4>& deg) {
  std::string s;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (i) s += " ";
    s += num(deg[i]);
  }
  return s;
}

// Shared tallies layout; ingest output must match the simulator's byte for
// byte, so there is exactly one builder.
Table make_tallies_table() {
  Table t;
  t.name = "tallies";
  t.columns = {"arm1_id", "arm2_id", "alpha_deg", "beta_deg", "n_pp", "n_mm",
               "n_pm",    "n_mp",    "n_total",   "e",        "std_error"};
  return t;
}

void add_tally_row(Table& t, std::uint32_t id1, std::uint32_t id2, double alpha_deg,
                   double beta_deg, const RunTally& tally) {
  const CorrelationEstimate est = tally.estimate();
  t.rows.push_back({static_cast<std::int64_t>(id1), static_cast<std::int64_t>(id2),
                    alpha_deg, beta_deg, static_cast<std::int64_t>(tally.n_pp),
                    static_cast<std::int64_t>(tally.n_mm), static_cast<std::int64_t>(tally.n_pm),
                    static_cast<std::int64_t>(tally.n_mp), static_cast<std::int64_t>(tally.n_total()),
                    est.value, est.std_error});
}

Table make_chsh_table(const ChshResult& r) {
  Table t;
  t.name = "chsh";
  t.columns = {"s", "std_error", "classification"};
  t.rows.push_back({r.s, r.std_error, std::string(to_string(r.classification))});
  return t;
}

Table make_terms_table(const std::array<double, 4>& terms, const std::array<double, 4>& deg) {
  Table t;
  t.name = "terms";
  t.columns = {"term", "arm1_deg", "arm2_deg", "e"};
  const char* labels[4] = {"E_ab", "E_abp", "E_apb", "E_apbp"};
  const double arm1[4] = {deg[0], deg[0], deg[2], deg[2]};
  const double arm2[4] = {deg[1], deg[3], deg[1], deg[3]};
  for (int i = 0; i < 4; ++i) {
    t.rows.push_back({std::string(labels[i]), arm1[i], arm2[i], terms[i]});
  }
  return t;
}

SettingsQuad quad_from_degrees(const std::array<double, 4>& deg) {
  return {Angle::from_degrees(deg[0]), Angle::from_degrees(deg[1]),
          Angle::from_degrees(deg[2]), Angle::from_degrees(deg[3])};
}

bool uses_quadrature(const Model& m) { return !std::holds_alternative<QmClosedForm>(m.kind); }

OutputDocument chsh_mc_document(const std::string& command, const Model& model,
                                const std::array<double, 4>& angles_deg, std::uint64_t pairs,
                                std::uint64_t seed, std::uint32_t shards,
                                const std::optional<int>& nodes,
                                std::array<std::vector<OutcomePair>, 4>* records) {
  RunConfig cfg;
  cfg.model = model;
  cfg.n_pairs = pairs;
  cfg.seed = seed;
  cfg.shards = shards;
  cfg.nodes = nodes.value_or(0);
  const ChshExperiment exp = run_chsh_tallies(cfg, quad_from_degrees(angles_deg), records);

  OutputDocument doc = make_doc("chsh", command);
  doc.meta("model", model.name);
  doc.meta("mode", "mc");
  doc.meta("angles_deg", join_angles(angles_deg));
  doc.meta("pairs", std::to_string(pairs));
  doc.meta("seed", std::to_string(seed));
  doc.meta("shards", std::to_string(shards));
  if (uses_quadrature(model)) {
    doc.meta("nodes", std::to_string(nodes.value_or(default_nodes(model))));
  }

  Table tallies = make_tallies_table();
  const double arm1_deg[4] = {angles_deg[0], angles_deg[0], angles_deg[2], angles_deg[2]};
  const double arm2_deg[4] = {angles_deg[1], angles_deg[3], angles_deg[1], angles_deg[3]};
  for (int k = 0; k < 4; ++k) {
    add_tally_row(tallies, static_cast<std::uint32_t>(k >> 1), static_cast<std::uint32_t>(k & 1),
                  arm1_deg[k], arm2_deg[k], exp.tallies[k]);
  }
  doc.tables.push_back(std::move(tallies));
  doc.tables.push_back(make_chsh_table(exp.result));
  return doc;
}

}  // namespace

OutputDocument cmd_analytic(const AnalyticParams& p) {
  const Model& model = find_model(p.model);
  const QuadratureRule rule = resolve_rule(model, p.nodes);
  const Angle alpha = Angle::from_degrees(p.alpha_deg);
  const Angle beta = Angle::from_degrees(p.beta_deg);

  const JointDistribution joint = model_joint(model, alpha, beta, rule);
  const auto normalized = joint.normalized();
  const double e = correlation_from_joint(joint);

  OutputDocument doc = make_doc("correlation", "analytic");
  doc.meta("model", model.name);
  doc.meta("alpha_deg", num(p.alpha_deg));
  doc.meta("beta_deg", num(p.beta_deg));
  if (uses_quadrature(model)) doc.meta("nodes", std::to_string(rule.nodes));

  Table joint_table;
  joint_table.name = "joint";
  joint_table.columns = {"component", "raw", "normalized"};
  const char* names[4] = {"pp", "mm", "pm", "mp"};
  const double raw[4] = {joint.ppp, joint.pmm, joint.ppm, joint.pmp};
  for (int i = 0; i < 4; ++i) {
    joint_table.rows.push_back({std::string(names[i]), raw[i], normalized[i]});
  }
  doc.tables.push_back(std::move(joint_table));

  Table corr;
  corr.name = "correlation";
  corr.columns = {"e", "total"};
  corr.rows.push_back({e, joint.total()});
  doc.tables.push_back(std::move(corr));
  return doc;
}

OutputDocument cmd_chsh(const ChshParams& p) {
  const Model& model = find_model(p.model);
  const QuadratureRule rule = resolve_rule(model, p.nodes);
  const SettingsQuad q = quad_from_degrees(p.angles_deg);

  if (p.mode == "mc") {
    return chsh_mc_document("chsh", model, p.angles_deg, p.pairs, p.seed, p.shards, p.nodes,
                            nullptr);
  }

  ChshResult result;
  if (p.mode == "analytic") {
    result = chsh_for_model(model, q, rule);
  } else if (p.mode == "counterfactual") {
    const auto* det = std::get_if<LocalDeterministic>(&model.kind);
    if (!det) {
      throw ValidationError("counterfactual mode requires a deterministic local model; '" +
                            model.name + "' samples outcome pairs jointly");
    }
    const std::array<double, 4> terms = {
        lhv_correlation(model, q.alpha, q.beta, rule),
        lhv_correlation(model, q.alpha, q.beta_prime, rule),
        lhv_correlation(model, q.alpha_prime, q.beta, rule),
        lhv_correlation(model, q.alpha_prime, q.beta_prime, rule),
    };
    result = make_chsh_result(terms, 0.0, default_bound_tolerance(model));
  } else if (p.mode == "sequential") {
    const auto terms = sequential_terms(model, q, rule);
    result = make_chsh_result(terms, 0.0, default_bound_tolerance(model));
  } else {
    throw ValidationError("unknown chsh mode '" + p.mode +
                          "' (expected analytic, counterfactual, sequential or mc)");
  }

  OutputDocument doc = make_doc("chsh", "chsh");
  doc.meta("model", model.name);
  doc.meta("mode", p.mode);
  doc.meta("angles_deg", join_angles(p.angles_deg));
  if (uses_quadrature(model)) doc.meta("nodes", std::to_string(rule.nodes));
  doc.tables.push_back(make_terms_table(result.terms, p.angles_deg));
  doc.tables.push_back(make_chsh_table(result));
  return doc;
}

OutputDocument cmd_scan(const ScanParams& p) {
  const Model& model = find_model(p.model);
  const QuadratureRule rule = resolve_rule(model, p.nodes);
  const double step = Angle::from_degrees(p.step_deg).radians;

  const auto curve = equal_gap_curve(model, step, rule);
  const ScanResult scan = scan_settings(model, step, rule);

  OutputDocument doc = make_doc("scan", "scan");
  doc.meta("model", model.name);
  doc.meta("step_deg", num(p.step_deg));
  if (uses_quadrature(model)) doc.meta("nodes", std::to_string(rule.nodes));

  Table best;
  best.name = "best";
  best.columns = {"alpha_deg",      "beta_deg", "alpha_prime_deg", "beta_prime_deg",
                  "delta_deg",      "best_s",   "abs_s",           "evaluations"};
  const SettingsQuad& bq = scan.best_settings;
  best.rows.push_back({bq.alpha.degrees(), bq.beta.degrees(), bq.alpha_prime.degrees(),
                       bq.beta_prime.degrees(), bq.beta.degrees() - bq.alpha.degrees(),
                       scan.best_s, std::abs(scan.best_s),
                       static_cast<std::int64_t>(scan.evaluations)});
  doc.tables.push_back(std::move(best));

  Table curve_table;
  curve_table.name = "curve";
  curve_table.columns = {"delta_deg", "s"};
  for (const auto& [delta, s] : curve) {
    curve_table.rows.push_back({Angle{delta}.degrees(), s});
  }
  doc.tables.push_back(std::move(curve_table));
  return doc;
}

OutputDocument cmd_mc(const McParams& p) {
  const Model& model = find_model(p.model);
  if (p.pair_deg.has_value() == p.quad_deg.has_value()) {
    throw ValidationError("mc needs either --alpha/--beta or --angles with four values");
  }

  OutputDocument doc;
  std::vector<EventRecord> events;

  if (p.pair_deg) {
    RunConfig cfg;
    cfg.model = model;
    cfg.n_pairs = p.pairs;
    cfg.seed = p.seed;
    cfg.shards = p.shards;
    cfg.nodes = p.nodes.value_or(0);
    const Angle alpha = Angle::from_degrees((*p.pair_deg)[0]);
    const Angle beta = Angle::from_degrees((*p.pair_deg)[1]);

    std::vector<OutcomePair> record;
    const RunTally tally = run_tally(cfg, alpha, beta, p.emit_events ? &record : nullptr);

    doc = make_doc("correlation", "mc");
    doc.meta("model", model.name);
    doc.meta("mode", "pair");
    doc.meta("alpha_deg", num((*p.pair_deg)[0]));
    doc.meta("beta_deg", num((*p.pair_deg)[1]));
    doc.meta("pairs", std::to_string(p.pairs));
    doc.meta("seed", std::to_string(p.seed));
    doc.meta("shards", std::to_string(p.shards));
    if (uses_quadrature(model)) {
      doc.meta("nodes", std::to_string(p.nodes.value_or(default_nodes(model))));
    }

    Table tallies = make_tallies_table();
    add_tally_row(tallies, 0, 0, (*p.pair_deg)[0], (*p.pair_deg)[1], tally);
    doc.tables.push_back(std::move(tallies));

    if (p.emit_events) {
      events = synthetic_pair_events(record, 0, 0, p.dt_ns, 0);
    }
  } else {
    std::array<std::vector<OutcomePair>, 4> records;
    doc = chsh_mc_document("mc", model, *p.quad_deg, p.pairs, p.seed, p.shards, p.nodes,
                           p.emit_events ? &records : nullptr);
    if (p.emit_events) {
      for (int k = 0; k < 4; ++k) {
        auto sub = synthetic_pair_events(records[k], static_cast<std::uint32_t>(k >> 1),
                                         static_cast<std::uint32_t>(k & 1), p.dt_ns,
                                         static_cast<std::uint64_t>(k) * p.pairs * p.dt_ns);
        events.insert(events.end(), sub.begin(), sub.end());
      }
    }
  }

  if (p.emit_events) {
    const std::uint64_t bytes = write_events_file(events, *p.emit_events);
    doc.meta("events", *p.emit_events);
    doc.meta("events_bytes", std::to_string(bytes));
    doc.meta("dt_ns", std::to_string(p.dt_ns));
  }
  return doc;
}

OutputDocument cmd_ingest(const IngestParams& p) {
  if (p.files.empty()) throw ValidationError("ingest needs at least one event file");
  const KeyValueConfig config = KeyValueConfig::load(p.config_path);

  CoincidenceConfig cfg;
  cfg.settings = config.settings_table();
  if (p.window_ns) {
    cfg.window_ns = *p.window_ns;
  } else if (config.has("window_ns")) {
    cfg.window_ns = config.get_uint("window_ns");
  } else {
    throw ValidationError("ingest needs --window or window_ns in the config");
  }
  if (cfg.window_ns == 0) throw ValidationError("coincidence window must be positive");

  TallyMap tallies;
  std::uint64_t matched = 0, unmatched1 = 0, unmatched2 = 0;
  for (const std::string& file : p.files) {
    const auto records = read_events_file(file);
    std::vector<EventRecord> arm1, arm2;
    for (const EventRecord& r : records) {
      (r.arm == 1 ? arm1 : arm2).push_back(r);
    }
    const MatchResult matches = match_coincidences(arm1, arm2, cfg);
    matched += matches.pairs.size();
    unmatched1 += matches.unmatched_arm1;
    unmatched2 += matches.unmatched_arm2;
    for (const auto& [key, tally] : tally_matches(matches, cfg)) {
      tallies[key] += tally;
    }
  }

  OutputDocument doc = make_doc("tally", "ingest");
  std::string files_meta;
  for (const auto& f : p.files) {
    if (!files_meta.empty()) files_meta += ";";
    files_meta += f;
  }
  doc.meta("files", files_meta);
  doc.meta("config", p.config_path);
  doc.meta("window_ns", std::to_string(cfg.window_ns));

  Table matching;
  matching.name = "matching";
  matching.columns = {"matched", "unmatched_arm1", "unmatched_arm2"};
  matching.rows.push_back({static_cast<std::int64_t>(matched),
                           static_cast<std::int64_t>(unmatched1),
                           static_cast<std::int64_t>(unmatched2)});
  doc.tables.push_back(std::move(matching));

  Table tally_table = make_tallies_table();
  for (const auto& [key, tally] : tallies) {
    add_tally_row(tally_table, key.first, key.second,
                  cfg.settings.arm1.at(key.first).degrees(),
                  cfg.settings.arm2.at(key.second).degrees(), tally);
  }
  doc.tables.push_back(std::move(tally_table));

  // With the canonical four setting pairs present, assemble S the same way
  // the simulator does: E(0,0) - E(0,1) + E(1,0) + E(1,1).
  const std::array<SettingsPairKey, 4> canonical = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  const bool have_quad =
      tallies.size() == 4 &&
      std::all_of(canonical.begin(), canonical.end(),
                  [&](const SettingsPairKey& k) { return tallies.count(k) > 0; });
  if (have_quad) {
    std::array<double, 4> terms{};
    double var_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const CorrelationEstimate est = tallies.at(canonical[k]).estimate();
      terms[k] = est.value;
      var_sum += est.std_error * est.std_error;
    }
    const double std_error = std::sqrt(var_sum);
    doc.tables.push_back(make_chsh_table(make_chsh_result(terms, std_error, 3.0 * std_error)));
  }
  return doc;
}

}  // namespace bellsim
