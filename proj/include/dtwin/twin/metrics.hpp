#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "dtwin/dynsys/trajectory.hpp"

namespace dtwin::twin {

/// Root-mean-square error over all rows and channels, each channel divided
/// by its scale (usually the reference standard deviation).
double nrmse(const dynsys::Samples& predicted, const dynsys::Samples& truth,
             const Eigen::VectorXd& scale);

/// Per-channel standard deviation (population form).
Eigen::VectorXd channel_std(const dynsys::Samples& x);

/// Mean spacing of upward crossings of a variable's mean, in time units.
/// Returns 0 when fewer than two crossings exist.
double mean_oscillation_period(const dynsys::Trajectory& t, std::size_t variable);

}  // namespace dtwin::twin
