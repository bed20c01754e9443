#include "bellsim/core_types.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {

Angle canonicalize(Angle a) {
  if (!std::isfinite(a.radians)) {
    throw std::domain_error("canonicalize: angle must be finite");
  }
  double r = std::fmod(a.radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // the fixup above can land exactly on 2pi when r was a tiny negative
  if (r >= kTwoPi) r = 0.0;
  return Angle{r};
}

std::array<double, 4> JointDistribution::normalized() const {
  const double t = total();
  if (!(t > 0.0)) {
    throw std::domain_error("JointDistribution: degenerate distribution, total weight is not positive");
  }
  return {ppp / t, pmm / t, ppm / t, pmp / t};
}

CorrelationEstimate CorrelationEstimate::from_counts(std::uint64_t n_pp,
                                                     std::uint64_t n_mm,
                                                     std::uint64_t n_pm,
                                                     std::uint64_t n_mp) {
  const std::uint64_t total = n_pp + n_mm + n_pm + n_mp;
  if (total == 0) {
    throw std::domain_error("CorrelationEstimate: no counts");
  }
  CorrelationEstimate e;
  e.n_pp = n_pp;
  e.n_mm = n_mm;
  e.n_pm = n_pm;
  e.n_mp = n_mp;
  const double agree = static_cast<double>(n_pp) + static_cast<double>(n_mm);
  const double disagree = static_cast<double>(n_pm) + static_cast<double>(n_mp);
  e.value = (agree - disagree) / static_cast<double>(total);
  e.std_error = std::sqrt(std::max(0.0, 1.0 - e.value * e.value) /
                          static_cast<double>(total));
  return e;
}

std::string_view to_string(BoundClass c) {
  switch (c) {
    case BoundClass::Classical: return "Classical";
    case BoundClass::QuantumViolating: return "QuantumViolating";
    case BoundClass::SuperQuantum: return "SuperQuantum";
  }
  return "Unknown";
}

BoundClass classify_s(double s, double tol) {
  const double mag = std::abs(s);
  if (mag <= kBellBound + tol) return BoundClass::Classical;
  if (mag <= kTsirelsonBound + tol) return BoundClass::QuantumViolating;
  return BoundClass::SuperQuantum;
}

ChshResult make_chsh_result(const std::array<double, 4>& terms, double std_error,
                            double tol) {
  ChshResult r;
  r.terms = terms;
  r.s = terms[0] - terms[1] + terms[2] + terms[3];
  r.std_error = std_error;
  r.classification = classify_s(r.s, tol);
  return r;
}

}  // namespace bellsim
