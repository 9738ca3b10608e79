#include "starstar/spin.hpp"

#include <cmath>

namespace starstar {

Spin::Spin(std::vector<double> components) : comps_(std::move(components)) {
  if (comps_.size() < 2) throw DomainError("Spin: need at least 2 components");
  double sum = 0.0;
  for (const double c : comps_) {
    if (!std::isfinite(c) || c < 0.0 || c >= kPi)
      throw DomainError("Spin: components must lie in [0, pi)");
    sum += c;
  }
  double r = std::fmod(sum, kPi);
  if (std::min(r, kPi - r) > kSpinSumTol)
    throw DomainError("Spin: components must sum to 0 mod pi");
}

Spin Spin::from_free(std::span<const double> free_components) {
  std::vector<double> comps(free_components.begin(), free_components.end());
  comps.push_back(dependent_component(free_components));
  return Spin(std::move(comps));
}

Spin Spin::negated() const {
  std::vector<double> comps(comps_);
  for (double& c : comps) c = (c == 0.0) ? 0.0 : kPi - c;
  return Spin(std::move(comps));
}

double dependent_component(std::span<const double> free_components) {
  double sum = 0.0;
  for (const double c : free_components) sum += c;
  double r = std::fmod(sum, kPi);
  if (r < 0.0) r += kPi;
  double dep = (r == 0.0) ? 0.0 : kPi - r;
  if (dep >= kPi) dep = 0.0;  // pi - r can round up to pi for tiny r
  return dep;
}

}  // namespace starstar
