#include "starstar/sampling.hpp"

namespace starstar {

Spin sample_spin(Xoshiro256pp& rng, int n) {
  if (n < 2) throw DomainError("sample_spin: require n >= 2");
  std::vector<double> free(static_cast<std::size_t>(n - 1));
  for (double& c : free) c = rng.uniform() * kPi;
  return Spin::from_free(free);
}

RapidityData sample_rapidities(Xoshiro256pp& rng, const EllipticNomes& nomes) {
  const double band = nomes.eta_re();
  const double lo = 0.1 * band;
  const double hi = 0.9 * band;
  for (int attempt = 0; attempt < kRegimeRejectionCap; ++attempt) {
    const double a1 = rng.uniform(lo, hi);
    const double a2 = rng.uniform(lo, hi);
    const double a3 = rng.uniform(lo, hi);
    const double a4 = a1 + a2 - a3;
    if (a4 > lo && a4 < hi) {
      RapidityData rap;
      rap.v = 0.0;
      rap.u = a1;
      rap.u_prime = a3;
      rap.v_prime = a3 - a2;
      return rap;
    }
  }
  throw RegimeError("sample_rapidities: rejection cap exceeded");
}

StarConfig sample_regime(Xoshiro256pp& rng, int n, const EllipticNomes& nomes) {
  const RapidityData rap = sample_rapidities(rng, nomes);
  Spin a = sample_spin(rng, n);
  Spin b = sample_spin(rng, n);
  Spin c = sample_spin(rng, n);
  Spin d = sample_spin(rng, n);
  return StarConfig{rap, std::move(a), std::move(b), std::move(c),
                    std::move(d), nomes};
}

}  // namespace starstar
