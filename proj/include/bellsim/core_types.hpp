#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

namespace bellsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Polarizer orientation or photon roll angle, in radians. Stored unreduced;
// every trigonometric use is periodic, so reduction is only cosmetic.
struct Angle {
  double radians = 0.0;

  static Angle from_degrees(double deg) { return {deg * kPi / 180.0}; }
  double degrees() const { return radians * 180.0 / kPi; }
};

// Reduce to [0, 2pi). Idempotent. Throws std::domain_error on non-finite input.
Angle canonicalize(Angle a);

// Detector channel behind a polarizing beamsplitter, numerically +1 / -1.
enum class Outcome : int { Plus = +1, Minus = -1 };

constexpr int sign_of(Outcome o) { return static_cast<int>(o); }

struct OutcomePair {
  Outcome arm1 = Outcome::Plus;
  Outcome arm2 = Outcome::Plus;
};

constexpr int outcome_product(OutcomePair p) {
  return sign_of(p.arm1) * sign_of(p.arm2);
}

// Raw joint detection weights for the channel pairs (++, --, +-, -+).
// Weights are kept exactly as the generating model produces them; the
// closed-form and amplitude models total 1/2, the local models total 1.
// normalized() is the view used for sampling and ratio-form estimators.
struct JointDistribution {
  double ppp = 0.0;  // [D1+, D2+]
  double pmm = 0.0;  // [D1-, D2-]
  double ppm = 0.0;  // [D1+, D2-]
  double pmp = 0.0;  // [D1-, D2+]

  double total() const { return ppp + pmm + ppm + pmp; }
  // Four probabilities summing to 1. Throws std::domain_error when total <= 0.
  std::array<double, 4> normalized() const;
};

// The four polarizer orientations of a four-setting correlation run.
struct SettingsQuad {
  Angle alpha, beta, alpha_prime, beta_prime;
};

// Deterministic per-arm response: (setting, lambda) -> +1 or -1.
struct ResponseFn {
  std::string identifier;
  std::function<int(Angle setting, Angle lambda)> eval;
};

// Stochastic per-arm response: (setting, lambda) -> probability of Plus.
struct ProbabilityFn {
  std::string identifier;
  std::function<double(Angle setting, Angle lambda)> eval;
};

struct QmClosedForm {};
struct PaperAmplitude {
  int nodes = 64;  // quadrature nodes for the averaged-amplitude integrals
};
struct LocalDeterministic {
  ResponseFn response;
};
struct LocalStochastic {
  ProbabilityFn response;
};

// Tagged description of which physical model generates outcomes. The two
// joint kinds (QmClosedForm, PaperAmplitude) assign probabilities to outcome
// pairs given both settings at once; the two local kinds answer per arm given
// only that arm's setting and the shared roll angle lambda.
struct Model {
  std::string name;
  std::variant<QmClosedForm, PaperAmplitude, LocalDeterministic, LocalStochastic> kind;

  bool is_joint_kind() const {
    return std::holds_alternative<QmClosedForm>(kind) ||
           std::holds_alternative<PaperAmplitude>(kind);
  }
  bool is_deterministic() const {
    return std::holds_alternative<LocalDeterministic>(kind);
  }
};

// Estimate of the correlation coefficient E from coincidence counts.
struct CorrelationEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_pp = 0, n_mm = 0, n_pm = 0, n_mp = 0;

  std::uint64_t n_total() const { return n_pp + n_mm + n_pm + n_mp; }

  // value = (n_pp + n_mm - n_pm - n_mp) / n_total,
  // std_error = sqrt((1 - value^2) / n_total).
  // Throws std::domain_error when all counts are zero.
  static CorrelationEstimate from_counts(std::uint64_t n_pp, std::uint64_t n_mm,
                                         std::uint64_t n_pm, std::uint64_t n_mp);
};

inline constexpr double kBellBound = 2.0;
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

inline constexpr double kAnalyticTolerance = 1e-9;
// Midpoint quadrature of a sign response converges at O(1/N); this matches
// the error observed at the default 2^16 nodes.
inline constexpr double kDiscontinuousTolerance = 1e-3;

enum class BoundClass { Classical, QuantumViolating, SuperQuantum };

std::string_view to_string(BoundClass c);

// Classical      iff |s| <= 2 + tol
// QuantumViolating iff 2 + tol < |s| <= 2*sqrt(2) + tol
// SuperQuantum   otherwise
BoundClass classify_s(double s, double tol);

// Four-setting statistic with its terms in the fixed order
// E(a,b), E(a,b'), E(a',b), E(a',b') and s = t0 - t1 + t2 + t3.
struct ChshResult {
  double s = 0.0;
  std::array<double, 4> terms{};
  double std_error = 0.0;  // 0 for analytic paths
  BoundClass classification = BoundClass::Classical;
};

ChshResult make_chsh_result(const std::array<double, 4>& terms, double std_error,
                            double tol);

}  // namespace bellsim
