#pragma once

#include <cmath>
#include <stdexcept>

#include "bellsim/core_types.hpp"
#include "bellsim/errors.hpp"

namespace bellsim {

// Uniform midpoint rule on [0, 2pi): N nodes at (k + 1/2) * 2pi / N, equal
// weights. On periodic integrands it is spectrally exact for trigonometric
// polynomials of frequency below N, and the half-step offset keeps nodes off
// the discontinuities of sign responses at generic settings.
struct QuadratureRule {
  int nodes = 1;

  static QuadratureRule midpoint(int n) {
    if (n < 1) throw std::domain_error("QuadratureRule: need at least one node");
    return QuadratureRule{n};
  }

  double spacing() const { return kTwoPi / nodes; }
  double point(int k) const { return (k + 0.5) * spacing(); }
};

// Defaults established by the convergence tests: smooth integrands are exact
// long before 1024 nodes; sign responses converge at O(1/N).
inline constexpr int kSmoothNodes = 1024;
inline constexpr int kDiscontinuousNodes = 1 << 16;

// Mean of f over one period, i.e. (1/2pi) * integral of f(lambda) d lambda
// evaluated as (1/N) * sum f(node_k). Summation runs in node order, so the
// result is bit-reproducible for a given N.
template <typename F>
double mean_over_period(F&& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int k = 0; k < rule.nodes; ++k) {
    const double lambda = rule.point(k);
    const double v = f(lambda);
    if (!std::isfinite(v)) {
      throw NumericalError("mean_over_period: integrand is not finite", lambda);
    }
    acc += v;
  }
  return acc / rule.nodes;
}

// Double mean of g(lambda, lambda') over the N x N product grid under the
// uniform product density.
template <typename G>
double mean_of_product_pairs(G&& g, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int k = 0; k < rule.nodes; ++k) {
    const double lambda = rule.point(k);
    double row = 0.0;
    for (int j = 0; j < rule.nodes; ++j) {
      const double lambda_prime = rule.point(j);
      const double v = g(lambda, lambda_prime);
      if (!std::isfinite(v)) {
        throw NumericalError("mean_of_product_pairs: integrand is not finite", lambda_prime);
      }
      row += v;
    }
    acc += row / rule.nodes;
  }
  return acc / rule.nodes;
}

}  // namespace bellsim
