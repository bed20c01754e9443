#include "bellsim/chsh.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {

namespace {

constexpr double kTermSlack = 1e-9;

void require_term(double e, const char* name) {
  if (!std::isfinite(e) || std::abs(e) > 1.0 + kTermSlack) {
    throw std::domain_error(std::string("chsh_s: ") + name + " must lie in [-1, 1]");
  }
}

// Per-lambda correlation of a local model with both arms at the same roll
// angle: the integrand of the lambda-averaged E terms.
double local_pair_correlation(const Model& m, Angle a, Angle b, Angle lambda) {
  if (const auto* det = std::get_if<LocalDeterministic>(&m.kind)) {
    const auto& f = det->response.eval;
    return static_cast<double>(f(a, lambda) * f(b, lambda));
  }
  const auto& p = std::get<LocalStochastic>(m.kind).response.eval;
  return (2.0 * p(a, lambda) - 1.0) * (2.0 * p(b, lambda) - 1.0);
}

}  // namespace

double chsh_s(double e_ab, double e_abp, double e_apb, double e_apbp) {
  require_term(e_ab, "E(a,b)");
  require_term(e_abp, "E(a,b')");
  require_term(e_apb, "E(a',b)");
  require_term(e_apbp, "E(a',b')");
  return e_ab - e_abp + e_apb + e_apbp;
}

ChshResult chsh_for_model(const Model& m, const SettingsQuad& q, const QuadratureRule& rule) {
  const std::array<double, 4> terms = {
      model_correlation(m, q.alpha, q.beta, rule),
      model_correlation(m, q.alpha, q.beta_prime, rule),
      model_correlation(m, q.alpha_prime, q.beta, rule),
      model_correlation(m, q.alpha_prime, q.beta_prime, rule),
  };
  return make_chsh_result(terms, 0.0, default_bound_tolerance(m));
}

double counterfactual_sample(const ResponseFn& response, Angle lambda, const SettingsQuad& q) {
  const auto& f = response.eval;
  const int a = f(q.alpha, lambda);
  const int ap = f(q.alpha_prime, lambda);
  const int b = f(q.beta, lambda);
  const int bp = f(q.beta_prime, lambda);
  return static_cast<double>(a * b - a * bp + ap * b + ap * bp);
}

double counterfactual_chsh(const ResponseFn& response, const SettingsQuad& q,
                           const QuadratureRule& rule) {
  double acc = 0.0;
  for (int k = 0; k < rule.nodes; ++k) {
    acc += counterfactual_sample(response, Angle{rule.point(k)}, q);
  }
  return acc / rule.nodes;
}

std::array<double, 4> sequential_terms(const Model& m, const SettingsQuad& q,
                                       const QuadratureRule& rule,
                                       const PairDensity& rho_prime) {
  if (m.is_joint_kind()) {
    return {
        model_correlation(m, q.alpha, q.beta, rule),
        model_correlation(m, q.alpha, q.beta_prime, rule),
        model_correlation(m, q.alpha_prime, q.beta, rule),
        model_correlation(m, q.alpha_prime, q.beta_prime, rule),
    };
  }
  const double e_ab = mean_over_period(
      [&](double l) { return local_pair_correlation(m, q.alpha, q.beta, Angle{l}); }, rule);
  const double e_apbp = mean_over_period(
      [&](double l) { return local_pair_correlation(m, q.alpha_prime, q.beta_prime, Angle{l}); },
      rule);
  double e_abp, e_apb;
  if (!rho_prime) {
    e_abp = mean_over_period(
        [&](double l) { return local_pair_correlation(m, q.alpha, q.beta_prime, Angle{l}); }, rule);
    e_apb = mean_over_period(
        [&](double l) { return local_pair_correlation(m, q.alpha_prime, q.beta, Angle{l}); }, rule);
  } else {
    e_abp = mean_of_product_pairs(
        [&](double l, double lp) {
          return rho_prime(l, lp) * local_pair_correlation(m, q.alpha, q.beta_prime, Angle{lp});
        },
        rule);
    e_apb = mean_of_product_pairs(
        [&](double l, double lp) {
          return rho_prime(l, lp) * local_pair_correlation(m, q.alpha_prime, q.beta, Angle{lp});
        },
        rule);
  }
  return {e_ab, e_abp, e_apb, e_apbp};
}

double sequential_chsh(const Model& m, const SettingsQuad& q, const QuadratureRule& rule,
                       const PairDensity& rho_prime) {
  const auto t = sequential_terms(m, q, rule, rho_prime);
  return t[0] - t[1] + t[2] + t[3];
}

SettingsQuad equal_gap_quad(double delta) {
  return {Angle{0.0}, Angle{delta}, Angle{2.0 * delta}, Angle{3.0 * delta}};
}

std::vector<std::pair<double, double>> equal_gap_curve(const Model& m, double grid_step,
                                                       const QuadratureRule& rule) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw std::domain_error("scan: grid step must be positive and finite");
  }
  const double steps_per_quarter = (0.5 * kPi) / grid_step;
  if (std::abs(steps_per_quarter - std::round(steps_per_quarter)) > 1e-9) {
    throw std::domain_error("scan: grid step must divide a quarter turn evenly");
  }
  const int n = 2 * static_cast<int>(std::round(steps_per_quarter));
  std::vector<std::pair<double, double>> curve;
  curve.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double delta = k * grid_step;
    curve.emplace_back(delta, chsh_for_model(m, equal_gap_quad(delta), rule).s);
  }
  return curve;
}

ScanResult scan_settings(const Model& m, double grid_step, const QuadratureRule& rule) {
  ScanResult result;
  result.grid_step = grid_step;

  // Family pass. Ascending delta with a strict comparison implements the
  // smallest-delta tie break.
  const auto curve = equal_gap_curve(m, grid_step, rule);
  result.evaluations = curve.size();
  double best_delta = curve.front().first;
  double best_s = curve.front().second;
  for (const auto& [delta, s] : curve) {
    if (std::abs(s) > std::abs(best_s)) {
      best_delta = delta;
      best_s = s;
    }
  }
  SettingsQuad best_q = equal_gap_quad(best_delta);

  // Local four-angle refinement with step halving; only strictly better
  // neighbors move the point.
  double step = 0.5 * grid_step;
  const double floor = grid_step / 8192.0;
  while (step > floor) {
    bool improved = false;
    for (int axis = 0; axis < 4; ++axis) {
      for (const double dir : {+1.0, -1.0}) {
        SettingsQuad candidate = best_q;
        double* angles[4] = {&candidate.alpha.radians, &candidate.beta.radians,
                             &candidate.alpha_prime.radians, &candidate.beta_prime.radians};
        *angles[axis] += dir * step;
        const double s = chsh_for_model(m, candidate, rule).s;
        ++result.evaluations;
        if (std::abs(s) > std::abs(best_s)) {
          best_q = candidate;
          best_s = s;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  result.best_settings = best_q;
  result.best_s = best_s;
  return result;
}

}  // namespace bellsim
