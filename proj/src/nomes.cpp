#include "starstar/nomes.hpp"

#include <cmath>

namespace starstar {

EllipticNomes::EllipticNomes(Complex p, Complex q, double trunc_eps)
    : p_(p),
      q_(q),
      pq_(p * q),
      trunc_eps_(trunc_eps),
      pole_tol_(1e3 * trunc_eps) {
  const double ap = std::abs(p_);
  const double aq = std::abs(q_);
  if (!std::isfinite(ap) || !(ap > 0.0) || !(ap < 1.0))
    throw DomainError("EllipticNomes: require 0 < |p| < 1");
  if (!std::isfinite(aq) || !(aq > 0.0) || !(aq < 1.0))
    throw DomainError("EllipticNomes: require 0 < |q| < 1");
  if (!(trunc_eps > 0.0) || !std::isfinite(trunc_eps))
    throw DomainError("EllipticNomes: trunc_eps must be positive");

  eta_ = -0.5 * std::log(pq_);

  // Largest factor in shell s = j + k is |pq| * max(|p|, |q|)^{2s}; stop once
  // that bound is below trunc_eps. Within a shell, j (the q exponent) runs
  // upward, matching the accumulation order of phi().
  const double amax2 = std::max(ap, aq) * std::max(ap, aq);
  std::vector<Complex> qpow{q_};  // q^{2j+1}
  std::vector<Complex> ppow{p_};  // p^{2k+1}
  double shell_bound = ap * aq;
  for (int s = 0; shell_bound >= trunc_eps_; ++s, shell_bound *= amax2) {
    while (static_cast<int>(qpow.size()) <= s) {
      qpow.push_back(qpow.back() * q_ * q_);
      ppow.push_back(ppow.back() * p_ * p_);
    }
    for (int j = 0; j <= s; ++j) {
      const Complex w = qpow[j] * ppow[s - j];
      if (std::abs(w) >= trunc_eps_) phi_factors_.push_back(w);
    }
  }
}

}  // namespace starstar
