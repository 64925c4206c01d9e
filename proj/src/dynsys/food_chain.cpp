#include "dtwin/dynsys/food_chain.hpp"

#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::dynsys {

void FoodChainParams::validate() const {
  for (double v : {K, xc, yc, xp, yp, R0, C0})
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorKind::config,
           "food_chain: all parameters must be finite and strictly positive");
}

std::array<double, 3> food_chain_rates(double R, double C, double P,
                                       const FoodChainParams& p) noexcept {
  const double uptake = p.yc * R / (R + p.R0);
  const double predation = p.yp * C / (C + p.C0);
  return {
      R * (1.0 - R / p.K) - p.xc * uptake * C,
      p.xc * C * (uptake - 1.0) - p.xp * predation * P,
      p.xp * P * (predation - 1.0),
  };
}

std::array<double, 3> food_chain_rhs(const FoodChainState& s,
                                     const FoodChainParams& p) {
  for (double v : {s.R, s.C, s.P})
    if (!(v >= 0.0) || !std::isfinite(v))
      fail(ErrorKind::invalid_state,
           "food_chain_rhs: densities must be finite and non-negative");
  return food_chain_rates(s.R, s.C, s.P, p);
}

}  // namespace dtwin::dynsys
