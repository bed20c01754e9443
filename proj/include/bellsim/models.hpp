#pragma once

#include <string_view>
#include <vector>

#include "bellsim/core_types.hpp"
#include "bellsim/quadrature.hpp"

namespace bellsim {

// Closed-form joint weights (cos^2(d)/4, cos^2(d)/4, sin^2(d)/4, sin^2(d)/4)
// with d = alpha - beta. Raw total is 1/2.
JointDistribution qm_joint(Angle alpha, Angle beta);

// Squared lambda-averaged amplitude products. Each weight squares the mean
// over lambda of the corresponding cos/sin product; the average runs over the
// amplitude, not over per-lambda probabilities, which is why this model is
// not a local hidden-variable model even though it integrates over lambda.
// Matches qm_joint to roundoff for any rule with at least 4 nodes.
JointDistribution amplitude_joint(Angle alpha, Angle beta, const QuadratureRule& rule);

// Ratio-form correlation (ppp + pmm - ppm - pmp) / total, in [-1, 1].
// Normalization-invariant. Throws std::domain_error on a degenerate input.
double correlation_from_joint(const JointDistribution& d);

// Correlation of a local model: the lambda-mean of A(alpha,l)*B(beta,l) for a
// deterministic response, or of (2p(alpha,l)-1)(2p(beta,l)-1) for a
// stochastic one. Throws std::domain_error for the joint model kinds.
double lhv_correlation(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule);

// Joint detection probabilities of a local model (total = 1): the
// lambda-mean of per-arm channel probabilities multiplied per pair.
JointDistribution lhv_joint(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule);

// Dispatch over all model kinds.
double model_correlation(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule);
JointDistribution model_joint(const Model& m, Angle alpha, Angle beta, const QuadratureRule& rule);

// Bundled catalog: "qm", "amplitude", "sign" (deterministic sign(cos)
// response) and "malus" (stochastic cos^2 detection probability).
const std::vector<Model>& model_catalog();
const Model& find_model(std::string_view name);  // throws ValidationError
std::vector<std::string> model_names();

// Quadrature size appropriate for the model's integrands.
int default_nodes(const Model& m);

// Bound-classification slack: discontinuous responses get the quadrature
// tolerance, everything else the analytic one.
double default_bound_tolerance(const Model& m);

}  // namespace bellsim
