#include "bellsim/montecarlo.hpp"

#include <cmath>

#include "bellsim/errors.hpp"
#include "bellsim/quadrature.hpp"

namespace bellsim {

namespace {

// Sampling state resolved once per (model, setting pair).
class OutcomeSampler {
public:
  OutcomeSampler(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule)
      : alpha_(alpha), beta_(beta) {
    if (m.is_joint_kind()) {
      kind_ = Kind::Joint;
      const auto w = model_joint(m, alpha, beta, rule).normalized();
      cum_pp_ = w[0];
      cum_mm_ = cum_pp_ + w[1];
      cum_pm_ = cum_mm_ + w[2];
    } else if (const auto* det = std::get_if<LocalDeterministic>(&m.kind)) {
      kind_ = Kind::Deterministic;
      response_ = &det->response;
    } else {
      kind_ = Kind::Stochastic;
      probability_ = &std::get<LocalStochastic>(m.kind).response;
    }
  }

  OutcomePair sample(SplitMix64& rng) const {
    switch (kind_) {
      case Kind::Joint: {
        const double u = rng.next_unit();
        if (u < cum_pp_) return {Outcome::Plus, Outcome::Plus};
        if (u < cum_mm_) return {Outcome::Minus, Outcome::Minus};
        if (u < cum_pm_) return {Outcome::Plus, Outcome::Minus};
        return {Outcome::Minus, Outcome::Plus};
      }
      case Kind::Deterministic: {
        const Angle lam = draw_lambda(rng);
        const auto& f = response_->eval;
        return {f(alpha_, lam) > 0 ? Outcome::Plus : Outcome::Minus,
                f(beta_, lam) > 0 ? Outcome::Plus : Outcome::Minus};
      }
      case Kind::Stochastic: {
        const Angle lam = draw_lambda(rng);
        const auto& p = probability_->eval;
        const double pa = p(alpha_, lam);
        const double pb = p(beta_, lam);
        const Outcome o1 = rng.next_unit() < pa ? Outcome::Plus : Outcome::Minus;
        const Outcome o2 = rng.next_unit() < pb ? Outcome::Plus : Outcome::Minus;
        return {o1, o2};
      }
    }
    return {};
  }

private:
  enum class Kind { Joint, Deterministic, Stochastic };
  Kind kind_ = Kind::Joint;
  Angle alpha_, beta_;
  double cum_pp_ = 0.0, cum_mm_ = 0.0, cum_pm_ = 0.0;
  const ResponseFn* response_ = nullptr;
  const ProbabilityFn* probability_ = nullptr;
};

QuadratureRule rule_for(const RunConfig& cfg) {
  return QuadratureRule::midpoint(cfg.nodes > 0 ? cfg.nodes : default_nodes(cfg.model));
}

}  // namespace

void RunConfig::validate() const {
  if (n_pairs < 1) throw ValidationError("run config: n_pairs must be at least 1");
  if (shards < 1) throw ValidationError("run config: shards must be at least 1");
  if (shards > n_pairs) throw ValidationError("run config: shards must not exceed n_pairs");
}

void RunTally::add(OutcomePair p) {
  const bool plus1 = p.arm1 == Outcome::Plus;
  const bool plus2 = p.arm2 == Outcome::Plus;
  if (plus1 && plus2) ++n_pp;
  else if (!plus1 && !plus2) ++n_mm;
  else if (plus1) ++n_pm;
  else ++n_mp;
}

RunTally& RunTally::operator+=(const RunTally& other) {
  n_pp += other.n_pp;
  n_mm += other.n_mm;
  n_pm += other.n_pm;
  n_mp += other.n_mp;
  return *this;
}

Angle draw_lambda(SplitMix64& rng) { return Angle{kTwoPi * rng.next_unit()}; }

OutcomePair sample_outcome(const Model& m, Angle alpha, Angle beta, SplitMix64& rng) {
  const OutcomeSampler sampler(m, alpha, beta,
                               QuadratureRule::midpoint(default_nodes(m)));
  return sampler.sample(rng);
}

RunTally run_tally(const RunConfig& cfg, Angle alpha, Angle beta,
                   std::vector<OutcomePair>* record) {
  cfg.validate();
  const OutcomeSampler sampler(cfg.model, alpha, beta, rule_for(cfg));
  if (record) record->reserve(record->size() + cfg.n_pairs);

  RunTally merged;
  const std::uint64_t base = cfg.n_pairs / cfg.shards;
  const std::uint64_t remainder = cfg.n_pairs % cfg.shards;
  for (std::uint32_t s = 0; s < cfg.shards; ++s) {
    const std::uint64_t count = base + (s < remainder ? 1 : 0);
    SplitMix64 rng = SplitMix64::stream(cfg.seed, s);
    RunTally shard;
    for (std::uint64_t i = 0; i < count; ++i) {
      const OutcomePair pair = sampler.sample(rng);
      shard.add(pair);
      if (record) record->push_back(pair);
    }
    merged += shard;
  }
  return merged;
}

CorrelationEstimate run_pair_experiment(const RunConfig& cfg, Angle alpha, Angle beta) {
  return run_tally(cfg, alpha, beta).estimate();
}

std::uint64_t chsh_subexperiment_seed(std::uint64_t seed, int pair_index) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(0x43485348ull + pair_index));
}

ChshExperiment run_chsh_tallies(const RunConfig& cfg, const SettingsQuad& q,
                                std::array<std::vector<OutcomePair>, 4>* records) {
  cfg.validate();
  const std::array<std::pair<Angle, Angle>, 4> pairs = {{
      {q.alpha, q.beta},
      {q.alpha, q.beta_prime},
      {q.alpha_prime, q.beta},
      {q.alpha_prime, q.beta_prime},
  }};

  ChshExperiment exp;
  std::array<double, 4> terms{};
  double var_sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    RunConfig sub = cfg;
    sub.seed = chsh_subexperiment_seed(cfg.seed, k);
    exp.tallies[k] = run_tally(sub, pairs[k].first, pairs[k].second,
                               records ? &(*records)[k] : nullptr);
    exp.estimates[k] = exp.tallies[k].estimate();
    terms[k] = exp.estimates[k].value;
    var_sum += exp.estimates[k].std_error * exp.estimates[k].std_error;
  }
  const double std_error = std::sqrt(var_sum);
  exp.result = make_chsh_result(terms, std_error, 3.0 * std_error);
  return exp;
}

ChshResult run_chsh_experiment(const RunConfig& cfg, const SettingsQuad& q) {
  return run_chsh_tallies(cfg, q).result;
}

}  // namespace bellsim
