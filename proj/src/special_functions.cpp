#include "starstar/special_functions.hpp"

#include <cmath>

namespace starstar {

namespace {

bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

Complex g_euler(Complex z, double trunc_eps) {
  int unused = 0;
  return g_euler_counted(z, trunc_eps, unused);
}

Complex g_euler_counted(Complex z, double trunc_eps, int& factors_used) {
  const double az = std::abs(z);
  if (!(az < 1.0)) throw DomainError("g_euler: require |z| < 1");
  if (!(trunc_eps > 0.0)) throw DomainError("g_euler: trunc_eps must be positive");
  factors_used = 0;
  const double thresh = trunc_eps * (1.0 - az * az);
  const Complex z2 = z * z;
  Complex term = z2;
  Complex prod = 1.0;
  while (std::abs(term) >= thresh) {
    prod *= 1.0 - term;
    term *= z2;
    if (++factors_used > 100000000)
      throw ConvergenceError("g_euler: factor cap exceeded");
  }
  return prod;
}

Complex phi(Complex z, const EllipticNomes& nomes) {
  const Complex e_plus = std::exp(2.0 * kI * z);
  const Complex e_minus = 1.0 / e_plus;
  const double pole_tol2 = nomes.pole_tol() * nomes.pole_tol();
  Complex num = 1.0;
  Complex den = 1.0;
  for (const Complex& w : nomes.phi_factors()) {
    const Complex d = 1.0 - e_minus * w;
    if (std::norm(d) < pole_tol2)
      throw PoleError("phi: denominator factor vanished; z is on the pole lattice");
    num *= 1.0 - e_plus * w;
    den *= d;
  }
  const Complex out = num / den;
  if (!is_finite(out)) throw EvaluationError("phi: non-finite result");
  return out;
}

Complex phi_series(Complex z, const EllipticNomes& nomes) {
  const double band = nomes.eta_re();
  const double margin = nomes.trunc_eps();
  if (!(z.imag() > -band + margin) || !(z.imag() < band - margin))
    throw StripError("phi_series: Im z must lie strictly inside (-Re eta, Re eta)");
  // Paired +-k term:
  //   [(e^{-2iz} pq)^k - (e^{2iz} pq)^k] / (k (q^{2k} - 1)(p^{2k} - 1)).
  // Every base has magnitude < 1 inside the strip, so no intermediate can
  // overflow no matter how slowly the sum converges near the strip edge.
  const Complex base_dn = std::exp(-2.0 * kI * z) * nomes.pq();
  const Complex base_up = std::exp(2.0 * kI * z) * nomes.pq();
  const Complex p2 = nomes.p() * nomes.p();
  const Complex q2 = nomes.q() * nomes.q();
  Complex dn = base_dn, up = base_up, p2k = p2, q2k = q2;
  Complex sum = 0.0;
  for (int k = 1;; ++k) {
    const Complex term =
        (dn - up) / (static_cast<double>(k) * (q2k - 1.0) * (p2k - 1.0));
    sum += term;
    if (std::abs(term) < nomes.trunc_eps()) break;
    if (k >= 100000) throw ConvergenceError("phi_series: term cap exceeded");
    dn *= base_dn;
    up *= base_up;
    p2k *= p2;
    q2k *= q2;
  }
  const Complex out = std::exp(sum);
  if (!is_finite(out)) throw EvaluationError("phi_series: non-finite result");
  return out;
}

namespace {

// Shared double-product core for Gamma and 1/Gamma. `reciprocal` exchanges
// the roles of the two factor families, which keeps the zeros of 1/Gamma
// exact instead of relying on a division by a huge number.
Complex gamma_product(Complex z, const EllipticNomes& nomes, bool reciprocal) {
  if (std::abs(z) == 0.0)
    throw DomainError("elliptic_gamma: z = 0 is outside the domain");
  const Complex p2 = nomes.p() * nomes.p();
  const Complex q2 = nomes.q() * nomes.q();
  const Complex p2q2_over_z = p2 * q2 / z;
  const double eps = nomes.trunc_eps();
  const double pole_tol2 = nomes.pole_tol() * nomes.pole_tol();
  const double amax = std::max(std::abs(nomes.p()), std::abs(nomes.q()));
  const double amax2 = amax * amax;

  std::vector<Complex> p2pow{1.0};
  std::vector<Complex> q2pow{1.0};
  Complex num = 1.0;
  Complex den = 1.0;
  // Largest deviation in shell s is bounded by max(|z|, |p^2 q^2 / z|) times
  // max(|p|,|q|)^{2s}.
  double shell_bound = std::max(std::abs(z), std::abs(p2q2_over_z));
  for (int s = 0; shell_bound >= eps; ++s, shell_bound *= amax2) {
    while (static_cast<int>(p2pow.size()) <= s) {
      p2pow.push_back(p2pow.back() * p2);
      q2pow.push_back(q2pow.back() * q2);
    }
    for (int j = 0; j <= s; ++j) {
      const Complex pq_jk = p2pow[j] * q2pow[s - j];
      const Complex dev_den = pq_jk * z;           // p^{2j} q^{2k} z
      const Complex dev_num = pq_jk * p2q2_over_z; // p^{2j+2} q^{2k+2} / z
      if (std::abs(dev_den) < eps && std::abs(dev_num) < eps) continue;
      const Complex fac_num = 1.0 - dev_num;
      const Complex fac_den = 1.0 - dev_den;
      if (!reciprocal) {
        if (std::norm(fac_den) < pole_tol2)
          throw PoleError(
              "elliptic_gamma: z is on the pole lattice p^{-2j} q^{-2k}");
        num *= fac_num;
        den *= fac_den;
      } else {
        if (std::norm(fac_num) < pole_tol2)
          throw PoleError(
              "elliptic_gamma_reciprocal: z is on the zero lattice of Gamma");
        num *= fac_den;
        den *= fac_num;
      }
    }
  }
  const Complex out = num / den;
  if (!is_finite(out)) throw EvaluationError("elliptic_gamma: non-finite result");
  return out;
}

}  // namespace

Complex elliptic_gamma(Complex z, const EllipticNomes& nomes) {
  return gamma_product(z, nomes, /*reciprocal=*/false);
}

Complex elliptic_gamma_reciprocal(Complex z, const EllipticNomes& nomes) {
  return gamma_product(z, nomes, /*reciprocal=*/true);
}

Complex kappa_s(int n, const EllipticNomes& nomes) {
  if (n < 2) throw DomainError("kappa_s: require n >= 2");
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const Complex gg =
      g_euler(nomes.q(), nomes.trunc_eps()) * g_euler(nomes.p(), nomes.trunc_eps());
  const Complex base = kPi / gg;
  Complex out = factorial;
  for (int k = 1; k < n; ++k) out *= base;
  return out;
}

Complex spin_pair_product(std::span<const double> x,
                          const EllipticNomes& nomes) {
  const int n = static_cast<int>(x.size());
  // Two angles in [0, pi) coincide mod pi only if they are equal, and the
  // factor 1 - e^{2i*0} vanishes identically there.
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (x[j] == x[k]) return 0.0;
  const Complex shift = -kI * nomes.eta();  // z = (x_j - x_k) - i eta
  Complex prod = 1.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      prod *= phi(Complex(x[j] - x[k], 0.0) + shift, nomes);
    }
  return prod;
}

Complex single_spin_s_components(std::span<const double> x,
                                 const EllipticNomes& nomes) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw DomainError("single_spin_s: need at least 2 components");
  return spin_pair_product(x, nomes) * (1.0 / kappa_s(n, nomes));
}

Complex single_spin_s(const Spin& x, const EllipticNomes& nomes) {
  return single_spin_s_components(x.components(), nomes);
}

}  // namespace starstar
