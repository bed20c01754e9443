#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellsim/core_types.hpp"
#include "bellsim/models.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

struct RunConfig {
  Model model;
  std::uint64_t n_pairs = 1;
  std::uint64_t seed = 0;
  std::uint32_t shards = 1;
  int nodes = 0;  // 0 picks the model default

  void validate() const;  // throws ValidationError
};

// Coincidence counts of one setting pair.
struct RunTally {
  std::uint64_t n_pp = 0, n_mm = 0, n_pm = 0, n_mp = 0;

  std::uint64_t n_total() const { return n_pp + n_mm + n_pm + n_mp; }
  void add(OutcomePair p);
  RunTally& operator+=(const RunTally& other);
  bool operator==(const RunTally&) const = default;

  CorrelationEstimate estimate() const {
    return CorrelationEstimate::from_counts(n_pp, n_mm, n_pm, n_mp);
  }
};

// Uniform roll angle in [0, 2pi); consumes one variate.
Angle draw_lambda(SplitMix64& rng);

// One emitted pair. Variate consumption is fixed per model kind so results
// survive refactoring:
//   joint kinds    1 uniform  categorical draw over the normalized weights
//                             in the order (++, --, +-, -+)
//   deterministic  1 uniform  lambda; outcomes are the responses
//   stochastic     3 uniforms lambda, then one Bernoulli per arm
OutcomePair sample_outcome(const Model& m, Angle alpha, Angle beta, SplitMix64& rng);

// n_pairs outcomes tallied across cfg.shards generator streams. Shard s
// draws from SplitMix64::stream(cfg.seed, s) and simulates n/shards pairs
// (earlier shards take the remainder); tallies merge in shard order, so the
// result is bit-identical for a fixed (seed, shards). When record is given
// the outcome pairs are appended in the same order.
RunTally run_tally(const RunConfig& cfg, Angle alpha, Angle beta,
                   std::vector<OutcomePair>* record = nullptr);

// Tally n_pairs outcomes and estimate E with its binomial standard error.
CorrelationEstimate run_pair_experiment(const RunConfig& cfg, Angle alpha, Angle beta);

struct ChshExperiment {
  std::array<RunTally, 4> tallies;            // (a,b), (a,b'), (a',b), (a',b')
  std::array<CorrelationEstimate, 4> estimates;
  ChshResult result;
};

// Four independent sub-experiments of n_pairs each, one per setting pair.
// Sub-experiment k runs with seed mix(cfg.seed ^ mix(0x43485348 + k)); the
// salt is ASCII "CHSH". Every emitted pair draws a fresh lambda, and no
// lambda is shared across setting pairs. S carries the root-sum-square
// standard error and is classified with the statistical tolerance
// 3 * std_error.
ChshExperiment run_chsh_tallies(const RunConfig& cfg, const SettingsQuad& q,
                                std::array<std::vector<OutcomePair>, 4>* records = nullptr);
ChshResult run_chsh_experiment(const RunConfig& cfg, const SettingsQuad& q);

std::uint64_t chsh_subexperiment_seed(std::uint64_t seed, int pair_index);

}  // namespace bellsim
