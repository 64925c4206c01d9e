#include "dtwin/twin/plan.hpp"

#include <cmath>
#include <sstream>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/dynsys/oracle.hpp"
#include "dtwin/error.hpp"
#include "dtwin/parallel.hpp"

namespace dtwin::twin {

double TrainingPlan::present() const {
  return present_param.value_or(train_params.empty() ? 0.0 : train_params.back());
}

void TrainingPlan::validate() const {
  if (train_params.empty())
    fail(ErrorKind::invalid_plan, "training plan has no parameter values");
  for (std::size_t i = 0; i < train_params.size(); ++i) {
    if (!std::isfinite(train_params[i]))
      fail(ErrorKind::invalid_plan, "training parameters must be finite");
    if (i > 0 && !(train_params[i] > train_params[i - 1]))
      fail(ErrorKind::invalid_plan,
           "training parameters must be strictly increasing");
  }
  if (samples_per_param < 2)
    fail(ErrorKind::invalid_plan, "need at least 2 samples per parameter");
  if (!(transient >= 0.0))
    fail(ErrorKind::invalid_plan, "transient must be >= 0");
  if (declared_critical) {
    for (double p : train_params)
      if (!(p < *declared_critical)) {
        std::ostringstream msg;
        msg << "training parameter " << p << " is not below the declared "
            << "critical value " << *declared_critical;
        fail(ErrorKind::invalid_plan, msg.str());
      }
  }
}

std::size_t TimeSeriesSet::dimension() const {
  return trajectories.empty() ? 0 : trajectories.front().dimension();
}

std::vector<double> TimeSeriesSet::params() const {
  std::vector<double> out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(t.param);
  return out;
}

TimeSeriesSet assemble_training_data(const TrainingPlan& plan) {
  plan.validate();
  const auto& sys = plan.system;
  sys.validate();

  std::vector<double> params = plan.train_params;
  const double p0 = plan.present();
  bool present_is_train = false;
  for (double p : params) present_is_train = present_is_train || p == p0;
  if (!present_is_train) params.push_back(p0);

  dynsys::ScanSettings settings;
  settings.transient = plan.transient;
  settings.window =
      static_cast<double>(plan.samples_per_param - 1) * sys.sampling_interval;

  std::vector<dynsys::Trajectory> runs(params.size());
  parallel_for(
      params.size(),
      [&](std::size_t i) {
        runs[i] = dynsys::settled_trajectory(sys, params[i], settings);
      },
      plan.threads);

  for (const auto& run : runs) {
    if (dynsys::summarize(run.samples, sys.collapse).collapsed) {
      std::ostringstream msg;
      msg << "invalid plan: " << sys.parameter_name << "=" << run.param
          << " is in the collapsed regime; train on pre-transition data only";
      fail(ErrorKind::invalid_plan, msg.str());
    }
  }

  TimeSeriesSet set;
  set.system_name = sys.name;
  set.system_params = sys.fixed_params;
  if (sys.kind == dynsys::SystemKind::continuous_ode) {
    set.system_params["sampling_interval"] = sys.sampling_interval;
    set.system_params["step"] = sys.step;
  }
  set.variable_names = sys.variable_names;
  set.collapse = sys.collapse;
  for (std::size_t i = 0; i < plan.train_params.size(); ++i)
    set.trajectories.push_back(runs[i]);
  set.present = present_is_train ? runs[plan.train_params.size() - 1] : runs.back();
  if (present_is_train)
    for (const auto& run : set.trajectories)
      if (run.param == p0) set.present = run;
  return set;
}

}  // namespace dtwin::twin
