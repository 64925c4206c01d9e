#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace dtwin::dynsys {

using Samples =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniformly sampled run of an M-dimensional system at one parameter value.
struct Trajectory {
  double param = 0.0;
  double t0 = 0.0;
  double dt = 1.0;
  Samples samples;  // one row per sample

  std::size_t size() const { return static_cast<std::size_t>(samples.rows()); }
  std::size_t dimension() const {
    return static_cast<std::size_t>(samples.cols());
  }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

  /// Throws invalid_state unless there are >= 2 finite samples and dt > 0.
  void validate() const;

  /// Copy of rows [first, first + count) with t0 shifted accordingly.
  Trajectory slice(std::size_t first, std::size_t count) const;
};

}  // namespace dtwin::dynsys
