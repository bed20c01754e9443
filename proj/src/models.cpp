#include "bellsim/models.hpp"

#include <cmath>
#include <stdexcept>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

void require_finite(Angle a, const char* where) {
  if (!std::isfinite(a.radians)) {
    throw std::domain_error(std::string(where) + ": angle must be finite");
  }
}

// sign(cos(setting - lambda)) without the cosine: reduce the difference to
// [0, 2pi) and compare against the quarter-circle boundaries.
int sign_cos_response(Angle setting, Angle lambda) {
  double t = std::fmod(setting.radians - lambda.radians, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return (t < 0.5 * kPi || t > 1.5 * kPi) ? +1 : -1;
}

double malus_probability(Angle setting, Angle lambda) {
  const double c = std::cos(setting.radians - lambda.radians);
  return c * c;
}

}  // namespace

JointDistribution qm_joint(Angle alpha, Angle beta) {
  require_finite(alpha, "qm_joint");
  require_finite(beta, "qm_joint");
  const double d = alpha.radians - beta.radians;
  const double c = std::cos(d);
  const double s = std::sin(d);
  return {c * c / 4.0, c * c / 4.0, s * s / 4.0, s * s / 4.0};
}

JointDistribution amplitude_joint(Angle alpha, Angle beta, const QuadratureRule& rule) {
  require_finite(alpha, "amplitude_joint");
  require_finite(beta, "amplitude_joint");
  if (rule.nodes < 4) {
    throw std::domain_error("amplitude_joint: integrands have frequency 2, need at least 4 nodes");
  }
  const double a = alpha.radians;
  const double b = beta.radians;
  const double m_pp = mean_over_period(
      [&](double l) { return std::cos(a - l) * std::cos(b - l); }, rule);
  const double m_mm = mean_over_period(
      [&](double l) { return std::sin(a - l) * std::sin(b - l); }, rule);
  const double m_pm = mean_over_period(
      [&](double l) { return std::cos(a - l) * std::sin(b - l); }, rule);
  const double m_mp = mean_over_period(
      [&](double l) { return std::sin(a - l) * std::cos(b - l); }, rule);
  return {m_pp * m_pp, m_mm * m_mm, m_pm * m_pm, m_mp * m_mp};
}

double correlation_from_joint(const JointDistribution& d) {
  const double t = d.total();
  if (!(t > 0.0)) {
    throw std::domain_error("correlation_from_joint: degenerate distribution");
  }
  return (d.ppp + d.pmm - d.ppm - d.pmp) / t;
}

double lhv_correlation(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule) {
  if (const auto* det = std::get_if<LocalDeterministic>(&m.kind)) {
    const auto& f = det->response.eval;
    return mean_over_period(
        [&](double l) {
          const Angle lam{l};
          return static_cast<double>(f(alpha, lam) * f(beta, lam));
        },
        rule);
  }
  if (const auto* sto = std::get_if<LocalStochastic>(&m.kind)) {
    const auto& p = sto->response.eval;
    return mean_over_period(
        [&](double l) {
          const Angle lam{l};
          return (2.0 * p(alpha, lam) - 1.0) * (2.0 * p(beta, lam) - 1.0);
        },
        rule);
  }
  throw std::domain_error("lhv_correlation: model '" + m.name + "' has no per-arm response");
}

JointDistribution lhv_joint(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule) {
  double s_pp = 0.0, s_mm = 0.0, s_pm = 0.0, s_mp = 0.0;
  if (const auto* det = std::get_if<LocalDeterministic>(&m.kind)) {
    const auto& f = det->response.eval;
    for (int k = 0; k < rule.nodes; ++k) {
      const Angle lam{rule.point(k)};
      const bool a_plus = f(alpha, lam) > 0;
      const bool b_plus = f(beta, lam) > 0;
      if (a_plus && b_plus) s_pp += 1.0;
      else if (!a_plus && !b_plus) s_mm += 1.0;
      else if (a_plus) s_pm += 1.0;
      else s_mp += 1.0;
    }
  } else if (const auto* sto = std::get_if<LocalStochastic>(&m.kind)) {
    const auto& p = sto->response.eval;
    for (int k = 0; k < rule.nodes; ++k) {
      const Angle lam{rule.point(k)};
      const double pa = p(alpha, lam);
      const double pb = p(beta, lam);
      if (!std::isfinite(pa) || !std::isfinite(pb)) {
        throw NumericalError("lhv_joint: response probability is not finite", lam.radians);
      }
      s_pp += pa * pb;
      s_mm += (1.0 - pa) * (1.0 - pb);
      s_pm += pa * (1.0 - pb);
      s_mp += (1.0 - pa) * pb;
    }
  } else {
    throw std::domain_error("lhv_joint: model '" + m.name + "' has no per-arm response");
  }
  const double n = rule.nodes;
  return {s_pp / n, s_mm / n, s_pm / n, s_mp / n};
}

double model_correlation(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule) {
  if (std::holds_alternative<QmClosedForm>(m.kind)) {
    return correlation_from_joint(qm_joint(alpha, beta));
  }
  if (std::holds_alternative<PaperAmplitude>(m.kind)) {
    return correlation_from_joint(amplitude_joint(alpha, beta, rule));
  }
  return lhv_correlation(m, alpha, beta, rule);
}

JointDistribution model_joint(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule) {
  if (std::holds_alternative<QmClosedForm>(m.kind)) return qm_joint(alpha, beta);
  if (std::holds_alternative<PaperAmplitude>(m.kind)) return amplitude_joint(alpha, beta, rule);
  return lhv_joint(m, alpha, beta, rule);
}

const std::vector<Model>& model_catalog() {
  static const std::vector<Model> catalog = {
      Model{"qm", QmClosedForm{}},
      Model{"amplitude", PaperAmplitude{64}},
      Model{"sign", LocalDeterministic{ResponseFn{"sign(cos(setting - lambda))", sign_cos_response}}},
      Model{"malus", LocalStochastic{ProbabilityFn{"cos^2(setting - lambda)", malus_probability}}},
  };
  return catalog;
}

const Model& find_model(std::string_view name) {
  for (const Model& m : model_catalog()) {
    if (m.name == name) return m;
  }
  std::string known;
  for (const Model& m : model_catalog()) {
    if (!known.empty()) known += ", ";
    known += m.name;
  }
  throw ValidationError("unknown model '" + std::string(name) + "' (available: " + known + ")");
}

std::vector<std::string> model_names() {
  std::vector<std::string> names;
  for (const Model& m : model_catalog()) names.push_back(m.name);
  return names;
}

int default_nodes(const Model& m) {
  if (const auto* amp = std::get_if<PaperAmplitude>(&m.kind)) return amp->nodes;
  if (m.is_deterministic()) return kDiscontinuousNodes;
  return kSmoothNodes;
}

double default_bound_tolerance(const Model& m) {
  return m.is_deterministic() ? kDiscontinuousTolerance : kAnalyticTolerance;
}

}  // namespace bellsim
