// bellsim: desk-scale simulator for photon-polarization correlation
// experiments. Subcommands: analytic, chsh, scan, mc, ingest.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellsim/commands.hpp"
#include "bellsim/config.hpp"
#include "bellsim/errors.hpp"
#include "bellsim/version.hpp"

namespace {

using bellsim::KeyValueConfig;

struct GlobalOpts {
  std::string format = "csv";
  bool full_precision = false;
  std::string config_path;
};

std::optional<KeyValueConfig> load_config(const GlobalOpts& g) {
  if (g.config_path.empty()) return std::nullopt;
  return KeyValueConfig::load(g.config_path);
}

// flag > config > env BELLSIM_SEED > 0
std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value,
                           const std::optional<KeyValueConfig>& config) {
  if (seed_opt->count() > 0) return flag_value;
  if (config && config->has("seed")) return config->get_uint("seed");
  if (const char* env = std::getenv("BELLSIM_SEED")) {
    return bellsim::parse_uint(env, "BELLSIM_SEED");
  }
  return 0;
}

void fill_model(const CLI::Option* opt, std::string& model,
                const std::optional<KeyValueConfig>& config) {
  if (opt->count() == 0 && config && config->has("model")) {
    model = *config->get("model");
  }
  if (model.empty()) throw bellsim::ValidationError("no model given (flag --model or config)");
}

std::optional<std::array<double, 4>> config_angles(const std::optional<KeyValueConfig>& config) {
  if (!config || !config->has("angles")) return std::nullopt;
  const auto values = config->get_doubles("angles");
  if (values.size() != 4) {
    throw bellsim::ValidationError("config key 'angles' must hold four values");
  }
  return std::array<double, 4>{values[0], values[1], values[2], values[3]};
}

void emit(const bellsim::OutputDocument& doc, const GlobalOpts& g) {
  const auto format =
      g.format == "json" ? bellsim::OutputFormat::Json : bellsim::OutputFormat::Csv;
  std::cout << bellsim::render(doc, format, bellsim::PrintOptions{g.full_precision});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-polarization correlation experiment simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", bellsim::kVersion);

  GlobalOpts global;
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--full-precision", global.full_precision,
               "print shortest round-trip numbers instead of 7 significant digits");
  app.add_option("--config", global.config_path,
                 "key = value config supplying defaults and settings tables");

  // analytic
  auto* analytic = app.add_subcommand("analytic", "joint weights and E for one setting pair");
  bellsim::AnalyticParams ap;
  auto* an_model = analytic->add_option("--model", ap.model, "model name");
  auto* an_alpha = analytic->add_option("--alpha", ap.alpha_deg, "arm-1 angle in degrees");
  auto* an_beta = analytic->add_option("--beta", ap.beta_deg, "arm-2 angle in degrees");
  int an_nodes = 0;
  auto* an_nodes_opt = analytic->add_option("--nodes", an_nodes, "quadrature nodes");

  // chsh
  auto* chsh = app.add_subcommand("chsh", "four-setting S statistic");
  bellsim::ChshParams cp;
  auto* ch_model = chsh->add_option("--model", cp.model, "model name");
  std::vector<double> ch_angles;
  auto* ch_angles_opt =
      chsh->add_option("--angles", ch_angles, "alpha beta alpha' beta' in degrees")
          ->expected(4);
  chsh->add_option("--mode", cp.mode, "analytic | counterfactual | sequential | mc")
      ->check(CLI::IsMember({"analytic", "counterfactual", "sequential", "mc"}))
      ->capture_default_str();
  auto* ch_pairs = chsh->add_option("--pairs", cp.pairs, "pairs per setting pair (mc mode)");
  auto* ch_seed = chsh->add_option("--seed", cp.seed, "generator seed (mc mode)");
  auto* ch_shards = chsh->add_option("--shards", cp.shards, "generator streams (mc mode)");
  int ch_nodes = 0;
  auto* ch_nodes_opt = chsh->add_option("--nodes", ch_nodes, "quadrature nodes");

  // scan
  auto* scan = app.add_subcommand("scan", "maximize |S| over equal-gap angle families");
  bellsim::ScanParams sp;
  auto* sc_model = scan->add_option("--model", sp.model, "model name");
  auto* sc_step = scan->add_option("--step", sp.step_deg, "grid step in degrees, divides 90")
                      ->capture_default_str();
  int sc_nodes = 0;
  auto* sc_nodes_opt = scan->add_option("--nodes", sc_nodes, "quadrature nodes");

  // mc
  auto* mc = app.add_subcommand("mc", "seeded Monte Carlo coincidence runs");
  bellsim::McParams mp;
  auto* mc_model = mc->add_option("--model", mp.model, "model name");
  double mc_alpha = 0.0, mc_beta = 0.0;
  auto* mc_alpha_opt = mc->add_option("--alpha", mc_alpha, "arm-1 angle in degrees");
  auto* mc_beta_opt = mc->add_option("--beta", mc_beta, "arm-2 angle in degrees");
  std::vector<double> mc_angles;
  auto* mc_angles_opt =
      mc->add_option("--angles", mc_angles, "alpha beta alpha' beta' in degrees")->expected(4);
  auto* mc_pairs = mc->add_option("--pairs", mp.pairs, "emitted pairs (per setting pair)")
                       ->capture_default_str();
  auto* mc_seed = mc->add_option("--seed", mp.seed, "generator seed");
  auto* mc_shards = mc->add_option("--shards", mp.shards, "generator streams")
                        ->capture_default_str();
  std::string mc_events;
  auto* mc_events_opt =
      mc->add_option("--emit-events", mc_events, "write the synthetic event file here");
  auto* mc_dt = mc->add_option("--dt-ns", mp.dt_ns, "emission interval for synthetic timestamps")
                    ->capture_default_str();
  int mc_nodes = 0;
  auto* mc_nodes_opt = mc->add_option("--nodes", mc_nodes, "quadrature nodes");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "coincidence-match event files into tallies");
  bellsim::IngestParams ip;
  ingest->add_option("files", ip.files, "event files")->expected(-1);
  std::string ingest_config;
  auto* ig_config = ingest->add_option("--settings", ingest_config,
                                       "config with the arm1.<id>/arm2.<id> settings table");
  std::uint64_t ig_window = 0;
  auto* ig_window_opt = ingest->add_option("--window", ig_window, "coincidence window in ns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = load_config(global);

    if (app.got_subcommand(analytic)) {
      fill_model(an_model, ap.model, config);
      if (an_alpha->count() == 0 && config && config->has("alpha"))
        ap.alpha_deg = config->get_double("alpha");
      if (an_beta->count() == 0 && config && config->has("beta"))
        ap.beta_deg = config->get_double("beta");
      if (an_nodes_opt->count() > 0) ap.nodes = an_nodes;
      else if (config && config->has("nodes")) ap.nodes = static_cast<int>(config->get_uint("nodes"));
      emit(bellsim::cmd_analytic(ap), global);
    } else if (app.got_subcommand(chsh)) {
      fill_model(ch_model, cp.model, config);
      if (ch_angles_opt->count() > 0) {
        std::copy(ch_angles.begin(), ch_angles.end(), cp.angles_deg.begin());
      } else if (const auto from_config = config_angles(config)) {
        cp.angles_deg = *from_config;
      } else {
        throw bellsim::ValidationError("chsh needs --angles with four values");
      }
      if (ch_pairs->count() == 0 && config && config->has("pairs"))
        cp.pairs = config->get_uint("pairs");
      if (ch_shards->count() == 0 && config && config->has("shards"))
        cp.shards = static_cast<std::uint32_t>(config->get_uint("shards"));
      if (ch_nodes_opt->count() > 0) cp.nodes = ch_nodes;
      else if (config && config->has("nodes")) cp.nodes = static_cast<int>(config->get_uint("nodes"));
      cp.seed = resolve_seed(ch_seed, cp.seed, config);
      emit(bellsim::cmd_chsh(cp), global);
    } else if (app.got_subcommand(scan)) {
      fill_model(sc_model, sp.model, config);
      if (sc_step->count() == 0 && config && config->has("step"))
        sp.step_deg = config->get_double("step");
      if (sc_nodes_opt->count() > 0) sp.nodes = sc_nodes;
      else if (config && config->has("nodes")) sp.nodes = static_cast<int>(config->get_uint("nodes"));
      emit(bellsim::cmd_scan(sp), global);
    } else if (app.got_subcommand(mc)) {
      fill_model(mc_model, mp.model, config);
      const bool have_pair_flags = mc_alpha_opt->count() > 0 || mc_beta_opt->count() > 0;
      if (mc_angles_opt->count() > 0) {
        std::array<double, 4> quad{};
        std::copy(mc_angles.begin(), mc_angles.end(), quad.begin());
        mp.quad_deg = quad;
      } else if (have_pair_flags) {
        if (mc_alpha_opt->count() == 0 || mc_beta_opt->count() == 0) {
          throw bellsim::ValidationError("mc needs both --alpha and --beta");
        }
        mp.pair_deg = std::array<double, 2>{mc_alpha, mc_beta};
      } else if (const auto from_config = config_angles(config)) {
        mp.quad_deg = *from_config;
      } else if (config && config->has("alpha") && config->has("beta")) {
        mp.pair_deg = std::array<double, 2>{config->get_double("alpha"), config->get_double("beta")};
      }
      if (mc_pairs->count() == 0 && config && config->has("pairs"))
        mp.pairs = config->get_uint("pairs");
      if (mc_shards->count() == 0 && config && config->has("shards"))
        mp.shards = static_cast<std::uint32_t>(config->get_uint("shards"));
      if (mc_dt->count() == 0 && config && config->has("dt_ns"))
        mp.dt_ns = config->get_uint("dt_ns");
      if (mc_nodes_opt->count() > 0) mp.nodes = mc_nodes;
      else if (config && config->has("nodes")) mp.nodes = static_cast<int>(config->get_uint("nodes"));
      if (mc_events_opt->count() > 0) mp.emit_events = mc_events;
      mp.seed = resolve_seed(mc_seed, mp.seed, config);
      emit(bellsim::cmd_mc(mp), global);
    } else if (app.got_subcommand(ingest)) {
      if (ig_config->count() > 0) {
        ip.config_path = ingest_config;
      } else if (!global.config_path.empty()) {
        ip.config_path = global.config_path;
      } else {
        throw bellsim::ValidationError("ingest needs --settings (or --config) with a settings table");
      }
      if (ig_window_opt->count() > 0) ip.window_ns = ig_window;
      emit(bellsim::cmd_ingest(ip), global);
    }
  } catch (const bellsim::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bellsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
