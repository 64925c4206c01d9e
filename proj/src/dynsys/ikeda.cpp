#include "dtwin/dynsys/ikeda.hpp"

#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::dynsys {

void IkedaParams::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0))
    fail(ErrorKind::config, "ikeda: gamma must lie in [0, 1)");
  if (!std::isfinite(mu) || !std::isfinite(kappa) || !std::isfinite(nu))
    fail(ErrorKind::config, "ikeda: parameters must be finite");
}

IkedaState ikeda_step(IkedaState s, const IkedaParams& p) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y))
    fail(ErrorKind::invalid_state, "ikeda_step: non-finite state");
  const double theta = p.kappa - p.nu / (1.0 + s.x * s.x + s.y * s.y);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return {p.mu + p.gamma * (s.x * c - s.y * sn),
          p.gamma * (s.x * sn + s.y * c)};
}

double ikeda_bound(const IkedaParams& p) {
  return std::abs(p.mu) / (1.0 - p.gamma);
}

}  // namespace dtwin::dynsys
