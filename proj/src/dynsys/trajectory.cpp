#include "dtwin/dynsys/trajectory.hpp"

#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::dynsys {

void Trajectory::validate() const {
  if (samples.rows() < 2)
    fail(ErrorKind::invalid_state, "trajectory needs at least 2 samples");
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(ErrorKind::invalid_state, "trajectory sample spacing must be > 0");
  if (!samples.allFinite())
    fail(ErrorKind::invalid_state, "trajectory contains non-finite samples");
}

Trajectory Trajectory::slice(std::size_t first, std::size_t count) const {
  if (first + count > size())
    fail(ErrorKind::invalid_input, "trajectory slice out of range");
  Trajectory out;
  out.param = param;
  out.dt = dt;
  out.t0 = time(first);
  out.samples = samples.middleRows(static_cast<Eigen::Index>(first),
                                   static_cast<Eigen::Index>(count));
  return out;
}

}  // namespace dtwin::dynsys
