#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bellsim/core_types.hpp"
#include "bellsim/models.hpp"
#include "bellsim/quadrature.hpp"

namespace bellsim {

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'). Inputs must lie in [-1, 1]
// up to 1e-9 slack; throws std::domain_error otherwise.
double chsh_s(double e_ab, double e_abp, double e_apb, double e_apbp);

// Four correlation terms for the quad, each computed the way the model
// defines them (closed form, averaged amplitudes, or lambda-quadrature),
// assembled into S and classified with the model's default tolerance.
ChshResult chsh_for_model(const Model& m, const SettingsQuad& q, const QuadratureRule& rule);

// The four-product combination at a single lambda shared by all settings:
// A(a)B(b) - A(a)B(b') + A(a')B(b) + A(a')B(b') with A = B = response.
// Algebraically A(a)[B(b)-B(b')] + A(a')[B(b)+B(b')], so the value is
// exactly +2 or -2 for any +/-1 response.
double counterfactual_sample(const ResponseFn& response, Angle lambda, const SettingsQuad& q);

// Lambda-mean of counterfactual_sample: the same-lambda averaging scheme.
// Bounded by 2 in magnitude for any deterministic response.
double counterfactual_chsh(const ResponseFn& response, const SettingsQuad& q,
                           const QuadratureRule& rule);

// Optional pair density for the split averaging scheme, expressed relative
// to the product of independent uniforms (so the constant 1 is the default).
// Only its lambda'-marginal affects the result; the hook exists to let
// correlated second-ensemble densities be explored.
using PairDensity = std::function<double(double lambda, double lambda_prime)>;

// Split averaging scheme: E(a,b) and E(a',b') are plain lambda-means over
// the first ensemble; E(a,b') and E(a',b) average the second measurement's
// correlation at lambda' under rho_prime. With the default density every
// term reduces to its own lambda-mean, so for local models the value agrees
// with counterfactual_chsh term by term, while the joint kinds keep their
// closed-form terms and may exceed 2.
std::array<double, 4> sequential_terms(const Model& m, const SettingsQuad& q,
                                       const QuadratureRule& rule,
                                       const PairDensity& rho_prime = {});
double sequential_chsh(const Model& m, const SettingsQuad& q, const QuadratureRule& rule,
                       const PairDensity& rho_prime = {});

struct ScanResult {
  SettingsQuad best_settings;
  double best_s = 0.0;
  double grid_step = 0.0;
  std::uint64_t evaluations = 0;
};

// Equal-gap family quad (0, d, 2d, 3d).
SettingsQuad equal_gap_quad(double delta);

// S along the equal-gap family, delta from 0 to pi exclusive in grid_step
// increments. Points are (delta, S).
std::vector<std::pair<double, double>> equal_gap_curve(const Model& m, double grid_step,
                                                       const QuadratureRule& rule);

// Coarse equal-gap scan followed by a local four-angle refinement with step
// halving. Ties break toward the smallest delta, so when +|S| and -|S|
// extremes tie the earlier family wins. grid_step must divide pi/2 into an
// integer number of steps.
ScanResult scan_settings(const Model& m, double grid_step, const QuadratureRule& rule);

}  // namespace bellsim
