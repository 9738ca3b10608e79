#include "starstar/rains.hpp"

#include <cmath>

namespace starstar {

namespace {

constexpr int kMaxN = 7;  // dims = n-1 <= 8 is enforced by the quadrature

void require_unit_disk(const std::vector<Complex>& vals, const char* which) {
  for (const Complex& v : vals)
    if (!(std::abs(v) < 1.0))
      throw DomainError(std::string("RainsParams: all ") + which +
                        " parameters must lie strictly inside the unit disk");
}

double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

}  // namespace

RainsParams::RainsParams(std::vector<Complex> t_in, std::vector<Complex> s_in,
                         int n_in, EllipticNomes nomes_in)
    : t(std::move(t_in)), s(std::move(s_in)), n(n_in), nomes(std::move(nomes_in)) {
  if (n < 2 || n > kMaxN) throw ConfigError("RainsParams: require 2 <= n <= 7");
  if (t.size() != static_cast<std::size_t>(2 * n) ||
      s.size() != static_cast<std::size_t>(2 * n))
    throw ConfigError("RainsParams: t and s must each hold 2n parameters");
  require_unit_disk(t, "t");
  require_unit_disk(s, "s");
}

QuadratureReport rains_integral(const RainsParams& params,
                                const QuadratureSpec& spec) {
  const int n = params.n;
  if (spec.dims != n - 1)
    throw ConfigError("rains_integral: spec.dims must equal n - 1");
  const EllipticNomes& nomes = params.nomes;
  Complex prefactor = 1.0 / factorial(n);
  const Complex gg = g_euler(nomes.p(), nomes.trunc_eps()) *
                     g_euler(nomes.q(), nomes.trunc_eps());
  for (int k = 1; k < n; ++k) prefactor *= gg;

  // One pass at resolution N: the free angles are theta_k = (m_k + 1/2) pi*2/N
  // and the dependent one is fixed by z_1..z_n = 1, so every z_k — and every
  // ratio z_k / z_l — lies on the 2N-point set e^{i pi M / N}. All gamma
  // evaluations are therefore precomputed into tables of length 2N and each
  // node is a pure table-lookup product.
  const GridPass pass = [&](int n_points) {
    const int two_n = 2 * n_points;
    std::vector<Complex> t_table(static_cast<std::size_t>(two_n));
    std::vector<Complex> s_table(static_cast<std::size_t>(two_n));
    std::vector<Complex> ratio_table(static_cast<std::size_t>(two_n));
    for (int m = 0; m < two_n; ++m) {
      const Complex z = std::exp(Complex(0.0, kPi * m / n_points));
      const Complex z_inv = std::conj(z);  // exact on the unit circle
      Complex pt = 1.0;
      Complex ps = 1.0;
      for (const Complex& tj : params.t) pt *= elliptic_gamma(tj * z, nomes);
      for (const Complex& sj : params.s) ps *= elliptic_gamma(sj * z_inv, nomes);
      t_table[static_cast<std::size_t>(m)] = pt;
      s_table[static_cast<std::size_t>(m)] = ps;
      ratio_table[static_cast<std::size_t>(m)] =
          elliptic_gamma_reciprocal(z, nomes);
    }
    const Complex sum =
        grid_sum(n - 1, n_points, [&](std::span<const int> idx) {
          int m_angle[kMaxN];
          int angle_sum = 0;
          for (int k = 0; k < n - 1; ++k) {
            m_angle[k] = 2 * idx[k] + 1;
            angle_sum += m_angle[k];
          }
          m_angle[n - 1] = (two_n - angle_sum % two_n) % two_n;
          Complex val = 1.0;
          for (int k = 0; k < n; ++k)
            val *= t_table[static_cast<std::size_t>(m_angle[k])] *
                   s_table[static_cast<std::size_t>(m_angle[k])];
          for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l) {
              const int diff =
                  ((m_angle[k] - m_angle[l]) % two_n + two_n) % two_n;
              val *= ratio_table[static_cast<std::size_t>(diff)] *
                     ratio_table[static_cast<std::size_t>((two_n - diff) % two_n)];
            }
          return val;
        });
    double scale = 1.0;
    for (int k = 1; k < n; ++k) scale /= n_points;
    return prefactor * scale * sum;
  };

  return integrate_doubling(spec, pass);
}

TildeParams tilde_transform(const RainsParams& params, int t_root_twist,
                            int s_root_twist) {
  const int n = params.n;
  TildeParams out;
  out.t_product = 1.0;
  out.s_product = 1.0;
  for (const Complex& tj : params.t) out.t_product *= tj;
  for (const Complex& sj : params.s) out.s_product *= sj;
  if (std::abs(out.t_product) == 0.0 || std::abs(out.s_product) == 0.0)
    throw DomainError("tilde_transform: parameter product vanishes");
  const double inv_n = 1.0 / n;
  Complex t_root = std::pow(out.t_product, inv_n);
  Complex s_root = std::pow(out.s_product, inv_n);
  const auto twist = [&](int k) {
    const int r = ((k % n) + n) % n;
    return std::exp(Complex(0.0, 2.0 * kPi * r / n));
  };
  if (t_root_twist % n != 0) t_root *= twist(t_root_twist);
  if (s_root_twist % n != 0) s_root *= twist(s_root_twist);
  out.t_tilde.reserve(params.t.size());
  out.s_tilde.reserve(params.s.size());
  bool inside = true;
  for (const Complex& tj : params.t) {
    out.t_tilde.push_back(t_root / tj);
    inside = inside && std::abs(out.t_tilde.back()) < 1.0;
  }
  for (const Complex& sj : params.s) {
    out.s_tilde.push_back(s_root / sj);
    inside = inside && std::abs(out.s_tilde.back()) < 1.0;
  }
  out.in_unit_polydisk = inside;
  return out;
}

RainsParams tilde_to_params(const RainsParams& base, const TildeParams& tp) {
  if (!tp.in_unit_polydisk)
    throw DomainError(
        "tilde_to_params: transformed parameters leave the unit polydisk");
  return RainsParams(tp.t_tilde, tp.s_tilde, base.n, base.nomes);
}

Complex gamma_cross_product(const RainsParams& params) {
  Complex prod = 1.0;
  for (const Complex& tj : params.t)
    for (const Complex& sk : params.s)
      prod *= elliptic_gamma(tj * sk, params.nomes);
  return prod;
}

double rains_residual(const RainsParams& params, const QuadratureSpec& spec,
                      int root_twist) {
  const Complex lhs = rains_integral(params, spec).value;
  const TildeParams tp = tilde_transform(params, root_twist, -root_twist);
  const Complex tilde_value =
      rains_integral(tilde_to_params(params, tp), spec).value;
  const Complex rhs = gamma_cross_product(params) * tilde_value;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

RainsParams rapidity_to_params(const StarConfig& cfg) {
  cfg.require_consistent();
  cfg.rap.require_regime(cfg.nomes);
  const int n = cfg.n();
  const double a1 = cfg.rap.alpha1();
  const double a2 = cfg.rap.alpha2();
  const double a3 = cfg.rap.alpha3();
  const double a4 = cfg.rap.alpha4();
  const Complex eta = cfg.nomes.eta();
  std::vector<Complex> t(2 * static_cast<std::size_t>(n));
  std::vector<Complex> s(2 * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    t[static_cast<std::size_t>(j)] = std::exp(Complex(-2.0 * a1, -2.0 * cfg.c[j]));
    t[static_cast<std::size_t>(n + j)] =
        std::exp(Complex(-2.0 * a2, -2.0 * cfg.b[j]));
    s[static_cast<std::size_t>(j)] =
        std::exp(2.0 * (a3 - eta) + Complex(0.0, 2.0 * cfg.a[j]));
    s[static_cast<std::size_t>(n + j)] =
        std::exp(2.0 * (a4 - eta) + Complex(0.0, 2.0 * cfg.d[j]));
  }
  return RainsParams(std::move(t), std::move(s), n, cfg.nomes);
}

Complex prefactor_rho(const StarConfig& cfg, const KappaFn& kappa) {
  cfg.require_consistent();
  cfg.rap.require_regime(cfg.nomes);
  const Complex sc = single_spin_s(cfg.c, cfg.nomes);
  const Complex sb = single_spin_s(cfg.b, cfg.nomes);
  const auto sqrt_real = [](Complex sv) {
    const double scale = std::abs(sv);
    if (std::abs(sv.imag()) > 1e-10 * scale)
      throw BranchError("prefactor_rho: single-spin weight is not real");
    return std::sqrt(std::max(sv.real(), 0.0));
  };
  Complex rho = sqrt_real(sc) * sqrt_real(sb);
  if (kappa) {
    const double band = cfg.nomes.eta_re();
    rho /= kappa(band - cfg.rap.alpha1()) * kappa(band - cfg.rap.alpha2()) *
           kappa(cfg.rap.alpha3()) * kappa(cfg.rap.alpha4());
  }
  return rho;
}

double check_equivalence_v1(const StarConfig& cfg, const QuadratureSpec& spec,
                            const KappaFn& kappa) {
  const Complex v1 = star_v1(cfg, spec, kappa).value;
  const RainsParams params = rapidity_to_params(cfg);
  const Complex integral = rains_integral(params, spec).value;
  const Complex rho = prefactor_rho(cfg, kappa);
  const double scale = std::abs(v1);
  if (scale == 0.0) return std::abs(rho * integral);
  return std::abs(v1 - rho * integral) / scale;
}

double check_equivalence_v2(const StarConfig& cfg, const QuadratureSpec& spec,
                            const KappaFn& kappa) {
  const Complex v2 = star_v2(cfg, spec, kappa).value;
  const RainsParams params = rapidity_to_params(cfg);
  const TildeParams tp = tilde_transform(params);
  const Complex integral =
      rains_integral(tilde_to_params(params, tp), spec).value;
  const Complex rho = prefactor_rho(cfg, kappa);
  const double scale = std::abs(v2);
  if (scale == 0.0) return std::abs(rho * integral);
  return std::abs(v2 - rho * integral) / scale;
}

}  // namespace starstar
