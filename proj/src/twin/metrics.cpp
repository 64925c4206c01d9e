#include "dtwin/twin/metrics.hpp"

#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::twin {

double nrmse(const dynsys::Samples& predicted, const dynsys::Samples& truth,
             const Eigen::VectorXd& scale) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols() ||
      scale.size() != truth.cols())
    fail(ErrorKind::invalid_input, "nrmse: shape mismatch");
  if (truth.size() == 0) return 0.0;
  const Eigen::ArrayXXd err = (predicted - truth).array().rowwise() /
                              scale.transpose().array();
  return std::sqrt(err.square().mean());
}

Eigen::VectorXd channel_std(const dynsys::Samples& x) {
  if (x.rows() == 0) return Eigen::VectorXd::Zero(x.cols());
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return ((x.rowwise() - mean).array().square().colwise().mean().sqrt())
      .transpose();
}

double mean_oscillation_period(const dynsys::Trajectory& t,
                               std::size_t variable) {
  if (variable >= t.dimension())
    fail(ErrorKind::invalid_input, "oscillation period: variable out of range");
  const auto col = t.samples.col(static_cast<Eigen::Index>(variable));
  const double mean = col.mean();
  Eigen::Index first = -1, last = -1, count = 0;
  for (Eigen::Index i = 1; i < col.size(); ++i) {
    if (col[i - 1] < mean && col[i] >= mean) {
      if (first < 0) first = i;
      last = i;
      ++count;
    }
  }
  if (count < 2) return 0.0;
  return static_cast<double>(last - first) / static_cast<double>(count - 1) * t.dt;
}

}  // namespace dtwin::twin
