#pragma once

namespace dtwin::dynsys {

/// Optical-cavity map z' = mu + gamma * z * exp(i (kappa - nu / (1 + |z|^2))).
struct IkedaParams {
  double mu = 1.0;     // input amplitude, the bifurcation parameter
  double gamma = 0.9;  // mirror reflection coefficient, in [0, 1)
  double kappa = 0.4;  // cavity detuning (radians)
  double nu = 6.0;     // detuning from the nonlinear medium

  void validate() const;
};

struct IkedaState {
  double x = 0.0;  // Re z
  double y = 0.0;  // Im z
};

/// One application of the map in real arithmetic. Throws invalid_state for
/// non-finite input.
IkedaState ikeda_step(IkedaState s, const IkedaParams& p);

/// Radius mu / (1 - gamma) of the absorbing disk every orbit enters.
double ikeda_bound(const IkedaParams& p);

}  // namespace dtwin::dynsys
