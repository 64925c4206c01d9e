#pragma once

#include <array>

namespace dtwin::dynsys {

/// Resource-consumer-predator chain. K is the bifurcation parameter.
struct FoodChainParams {
  double K = 0.98;
  double xc = 0.4;
  double yc = 2.009;
  double xp = 0.08;
  double yp = 2.876;
  double R0 = 0.16129;
  double C0 = 0.5;

  void validate() const;
};

struct FoodChainState {
  double R = 0.0;
  double C = 0.0;
  double P = 0.0;
};

/// Rates (dR/dt, dC/dt, dP/dt). Throws invalid_state for negative or
/// non-finite densities.
std::array<double, 3> food_chain_rhs(const FoodChainState& s,
                                     const FoodChainParams& p);

/// Unchecked kernel shared by the checked entry point and the integrator.
std::array<double, 3> food_chain_rates(double R, double C, double P,
                                       const FoodChainParams& p) noexcept;

}  // namespace dtwin::dynsys
