#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dtwin/dynsys/trajectory.hpp"

namespace dtwin::reservoir {

struct Readout {
  Eigen::MatrixXd weights;  // W_out, L x N

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& r) const {
    return weights * r;
  }
};

struct FitResult {
  Readout readout;
  /// Root-mean-square residual per target component over the fitted rows.
  double residual = 0.0;
  std::vector<std::string> warnings;
};

/// Running sums R^T R and R^T Y of a ridge regression. Chunks may come from
/// different trajectories; adding them in a fixed order keeps the solve
/// deterministic.
class NormalEquations {
 public:
  NormalEquations(std::size_t features, std::size_t outputs);

  void add(const dynsys::Samples& states, const dynsys::Samples& targets);

  std::size_t rows() const { return rows_; }

  /// W_out = argmin sum ||W r - y||^2 + ridge ||W||_F^2. Throws
  /// rank_deficiency when ridge == 0 and R^T R is singular.
  Readout solve(double ridge) const;

 private:
  Eigen::MatrixXd gram_;   // lower triangle is authoritative
  Eigen::MatrixXd cross_;  // N x L
  std::size_t rows_ = 0;
};

/// One-shot ridge fit of targets (rows) on states (rows).
FitResult fit_readout(const dynsys::Samples& states,
                      const dynsys::Samples& targets, double ridge);

/// RMS of W r - y over all rows and components.
double readout_residual(const Readout& readout, const dynsys::Samples& states,
                        const dynsys::Samples& targets);

}  // namespace dtwin::reservoir
