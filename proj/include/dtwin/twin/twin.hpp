#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/trajectory.hpp"
#include "dtwin/reservoir/config.hpp"
#include "dtwin/reservoir/matrices.hpp"
#include "dtwin/reservoir/readout.hpp"
#include "dtwin/twin/plan.hpp"

namespace dtwin::twin {

/// Affine maps between system units and network units.
struct Normalization {
  Eigen::VectorXd mean;   // per channel
  Eigen::VectorXd scale;  // per channel, nonzero
  double param_center = 0.0;
  double param_scale = 1.0;  // nonzero

  dynsys::Samples normalize(const dynsys::Samples& x) const;
  Eigen::VectorXd denormalize(const Eigen::VectorXd& v) const;
  double normalize_param(double p) const {
    return (p - param_center) / param_scale;
  }
};

/// The self-evolving digital copy: fixed reservoir, fitted readout, the
/// normalization used in training, and what predictions need to run.
struct TrainedTwin {
  reservoir::ReservoirConfig config;
  reservoir::ReservoirMatrices matrices;
  reservoir::Readout readout;
  Normalization norm;
  std::vector<double> train_params;
  double residual = 0.0;

  std::string system_name;
  std::map<std::string, double> system_params;
  std::vector<std::string> variable_names;
  dynsys::CollapseCriterion collapse;
  double sample_dt = 1.0;
  double present_param = 0.0;
  /// Tail of the most recent observation at the present parameter.
  dynsys::Trajectory warm;
};

/// Fits one readout over all trajectories. Each trajectory drives the
/// network from r = 0 with its own normalized parameter; the first `warmup`
/// states are dropped and the targets are the next inputs.
TrainedTwin train_twin(const TimeSeriesSet& data,
                       const reservoir::ReservoirConfig& config);

enum class PredictionStatus { sustained, collapsed, diverged };

const char* to_string(PredictionStatus s) noexcept;

struct Forecast {
  dynsys::Trajectory trajectory;  // may be empty or truncated
  PredictionStatus status = PredictionStatus::sustained;
  std::string note;
};

/// Warms the network open-loop on `warm` while injecting p, then runs the
/// closed loop for `horizon` steps at p. Output is in system units.
Forecast predict_at_parameter(const TrainedTwin& twin, double p,
                              const dynsys::Trajectory& warm,
                              std::size_t horizon);

/// Closed-loop continuation from the end of `warm` at the parameter the warm
/// data was recorded at; used for short-term fidelity scoring.
dynsys::Samples self_predict(const TrainedTwin& twin,
                             const dynsys::Trajectory& warm,
                             std::size_t horizon);

}  // namespace dtwin::twin
