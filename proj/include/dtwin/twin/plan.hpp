#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/system.hpp"

namespace dtwin::twin {

/// Data-collection plan: observe the system at a few parameter values in the
/// normal regime, and at the present value p0.
struct TrainingPlan {
  dynsys::SystemSpec system;
  std::vector<double> train_params;      // strictly increasing
  std::size_t samples_per_param = 10000;
  double transient = 1e4;                // time units discarded per run
  std::optional<double> present_param;   // defaults to the last train param
  /// Known critical value, only for validation experiments.
  std::optional<double> declared_critical;
  unsigned threads = 0;

  double present() const;
  void validate() const;
};

/// Trajectories tagged with the parameter they were generated at.
struct TimeSeriesSet {
  std::string system_name;
  /// Fixed parameters and integration settings the data was generated with.
  std::map<std::string, double> system_params;
  std::vector<std::string> variable_names;
  dynsys::CollapseCriterion collapse;
  std::vector<dynsys::Trajectory> trajectories;  // sorted by param
  /// Most recent observation, at the present parameter.
  dynsys::Trajectory present;

  std::size_t dimension() const;
  std::vector<double> params() const;
};

/// Simulates one post-transient trajectory per train param (and one at the
/// present param). Throws invalid_plan when a plan parameter is already in
/// the collapsed regime: training uses pre-transition data only.
TimeSeriesSet assemble_training_data(const TrainingPlan& plan);

}  // namespace dtwin::twin
