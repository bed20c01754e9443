#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/output.hpp"

namespace bellsim {

// Parameter structs mirror the CLI flags; angles arrive in degrees and are
// converted exactly once at this boundary.

struct AnalyticParams {
  std::string model;
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  std::optional<int> nodes;
};

struct ChshParams {
  std::string model;
  std::array<double, 4> angles_deg{};  // alpha, beta, alpha', beta'
  std::string mode = "analytic";       // analytic | counterfactual | sequential | mc
  std::uint64_t pairs = 1000000;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  std::optional<int> nodes;
};

struct ScanParams {
  std::string model;
  double step_deg = 2.5;
  std::optional<int> nodes;
};

struct McParams {
  std::string model;
  std::optional<std::array<double, 2>> pair_deg;   // alpha, beta
  std::optional<std::array<double, 4>> quad_deg;   // alpha, beta, alpha', beta'
  std::uint64_t pairs = 100000;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  std::optional<std::string> emit_events;
  std::uint64_t dt_ns = 1000;
  std::optional<int> nodes;
};

struct IngestParams {
  std::vector<std::string> files;
  std::string config_path;
  std::optional<std::uint64_t> window_ns;  // falls back to window_ns in the config
};

OutputDocument cmd_analytic(const AnalyticParams& p);
OutputDocument cmd_chsh(const ChshParams& p);
OutputDocument cmd_scan(const ScanParams& p);
OutputDocument cmd_mc(const McParams& p);
OutputDocument cmd_ingest(const IngestParams& p);

}  // namespace bellsim
