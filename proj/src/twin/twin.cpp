#include "dtwin/twin/twin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtwin/error.hpp"
#include "dtwin/reservoir/esn.hpp"
#include "dtwin/rng.hpp"

namespace dtwin::twin {

using dynsys::Samples;
using dynsys::Trajectory;

Samples Normalization::normalize(const Samples& x) const {
  Samples out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    out.col(j) = (x.col(j).array() - mean[j]) / scale[j];
  return out;
}

Eigen::VectorXd Normalization::denormalize(const Eigen::VectorXd& v) const {
  return (v.array() * scale.array() + mean.array()).matrix();
}

const char* to_string(PredictionStatus s) noexcept {
  switch (s) {
    case PredictionStatus::sustained: return "sustained";
    case PredictionStatus::collapsed: return "collapsed";
    case PredictionStatus::diverged: return "diverged";
  }
  return "unknown";
}

namespace {

Normalization fit_normalization(const TimeSeriesSet& data) {
  const auto m = static_cast<Eigen::Index>(data.dimension());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
  double count = 0.0;
  for (const auto& t : data.trajectories) {
    sum += t.samples.colwise().sum().transpose();
    count += static_cast<double>(t.size());
  }
  Normalization n;
  n.mean = sum / count;
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(m);
  for (const auto& t : data.trajectories)
    sq += (t.samples.rowwise() - n.mean.transpose())
              .array()
              .square()
              .colwise()
              .sum()
              .matrix()
              .transpose();
  n.scale = (sq / count).cwiseSqrt();
  for (Eigen::Index j = 0; j < m; ++j)
    if (!(n.scale[j] > 0.0)) n.scale[j] = 1.0;

  const auto params = data.params();
  const auto [lo, hi] = std::minmax_element(params.begin(), params.end());
  n.param_center = 0.5 * (*lo + *hi);
  n.param_scale = *hi > *lo ? 0.5 * (*hi - *lo) : 1.0;
  return n;
}

void check_data(const TimeSeriesSet& data, const reservoir::ReservoirConfig& cfg) {
  if (data.trajectories.empty())
    fail(ErrorKind::invalid_input, "train_twin: no trajectories");
  const std::size_t m = data.dimension();
  for (const auto& t : data.trajectories) {
    t.validate();
    if (t.dimension() != m)
      fail(ErrorKind::invalid_input, "train_twin: trajectories differ in dimension");
    if (t.size() <= cfg.warmup + 1)
      fail(ErrorKind::invalid_input,
           "train_twin: trajectory shorter than the warmup length");
  }
  if (cfg.input_dim != m || cfg.output_dim != m) {
    std::ostringstream msg;
    msg << "train_twin: data dimension " << m << " does not match reservoir "
        << "input/output dimension " << cfg.input_dim << "/" << cfg.output_dim;
    fail(ErrorKind::invalid_input, msg.str());
  }
}

// Fitting rows of one trajectory: states after inputs u(0..T-2) with the
// warmup dropped, paired with targets u(w+1..T-1).
struct FitRows {
  Samples states;
  Samples targets;
};

// With input noise the drive is jittered but the targets stay clean; the
// jitter stream depends only on the reservoir seed and trajectory index.
FitRows fit_rows(const TrainedTwin& twin, const Trajectory& t, std::size_t index) {
  const Samples u = twin.norm.normalize(t.samples);
  const auto n = u.rows();
  const auto w = static_cast<Eigen::Index>(twin.config.warmup);
  Samples drive = u.topRows(n - 1);
  if (twin.config.input_noise > 0.0) {
    Rng rng(stage_seed(twin.config.seed, "input_noise", index));
    const double s = twin.config.input_noise;
    for (Eigen::Index i = 0; i < drive.rows(); ++i)
      for (Eigen::Index j = 0; j < drive.cols(); ++j) drive(i, j) += rng.uniform(-s, s);
  }
  auto r = reservoir::ReservoirState::zero(twin.matrices.size());
  Samples states = reservoir::drive_open_loop(
      twin.matrices, twin.config, r, drive, twin.norm.normalize_param(t.param));
  return {states.bottomRows(n - 1 - w), u.bottomRows(n - 1 - w)};
}

}  // namespace

TrainedTwin train_twin(const TimeSeriesSet& data,
                       const reservoir::ReservoirConfig& config) {
  config.validate();
  check_data(data, config);

  TrainedTwin twin;
  twin.config = config;
  twin.norm = fit_normalization(data);
  twin.matrices = reservoir::build_reservoir(config);
  twin.train_params = data.params();
  twin.system_name = data.system_name;
  twin.system_params = data.system_params;
  twin.variable_names = data.variable_names;
  twin.collapse = data.collapse;
  twin.sample_dt = data.trajectories.front().dt;

  reservoir::NormalEquations eq(config.size, config.output_dim);
  for (std::size_t i = 0; i < data.trajectories.size(); ++i) {
    const auto& t = data.trajectories[i];
    const FitRows rows = fit_rows(twin, t, i);
    eq.add(rows.states, rows.targets);
  }
  twin.readout = eq.solve(config.ridge);

  // Second pass for the residual keeps peak memory at one trajectory.
  double sse = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < data.trajectories.size(); ++i) {
    const auto& t = data.trajectories[i];
    const FitRows rows = fit_rows(twin, t, i);
    const double rms = reservoir::readout_residual(twin.readout, rows.states,
                                                   rows.targets);
    const double n = static_cast<double>(rows.targets.size());
    sse += rms * rms * n;
    count += n;
  }
  twin.residual = std::sqrt(sse / count);

  const Trajectory& present =
      data.present.size() > 0 ? data.present : data.trajectories.back();
  twin.present_param = present.param;
  const std::size_t keep = std::min(present.size(), config.warmup);
  twin.warm = present.slice(present.size() - keep, keep);
  return twin;
}

namespace {

// Open-loop warmup on `warm` at the normalized parameter; returns the state
// that has consumed the last warm sample.
reservoir::ReservoirState warm_up(const TrainedTwin& twin,
                                  const Trajectory& warm, double p_norm) {
  auto r = reservoir::ReservoirState::zero(twin.matrices.size());
  if (warm.size() > 0)
    reservoir::drive_open_loop(twin.matrices, twin.config, r,
                               twin.norm.normalize(warm.samples), p_norm);
  return r;
}

}  // namespace

Forecast predict_at_parameter(const TrainedTwin& twin, double p,
                              const Trajectory& warm, std::size_t horizon) {
  if (warm.size() > 0 && warm.dimension() != twin.config.input_dim)
    fail(ErrorKind::invalid_input, "predict: warm series has wrong dimension");
  if (!std::isfinite(p)) fail(ErrorKind::invalid_input, "predict: non-finite p");

  const double p_norm = twin.norm.normalize_param(p);
  auto r = warm_up(twin, warm, p_norm);

  Forecast f;
  f.trajectory.param = p;
  f.trajectory.dt = twin.sample_dt;
  f.trajectory.t0 = warm.size() > 0 ? warm.time(warm.size() - 1) + twin.sample_dt
                                    : 0.0;
  Samples out(static_cast<Eigen::Index>(horizon),
              static_cast<Eigen::Index>(twin.config.output_dim));
  std::size_t produced = 0;
  bool diverged = false;
  for (; produced < horizon; ++produced) {
    reservoir::ClosedLoopStep step;
    try {
      step = reservoir::step_closed_loop(twin.matrices, twin.config,
                                         twin.readout, r, p_norm);
    } catch (const DivergenceError& e) {
      diverged = true;
      f.note = e.what();
      break;
    }
    const Eigen::VectorXd v = twin.norm.denormalize(step.output);
    if (!v.allFinite() || v.norm() > twin.collapse.blow_up_norm) {
      diverged = true;
      std::ostringstream msg;
      msg << "twin state left the blow-up bound at step " << produced;
      f.note = msg.str();
      break;
    }
    out.row(static_cast<Eigen::Index>(produced)) = v.transpose();
    r = std::move(step.state);
  }
  f.trajectory.samples = out.topRows(static_cast<Eigen::Index>(produced));

  if (diverged && twin.collapse.blow_up_collapses) {
    f.status = PredictionStatus::collapsed;
    f.note = "escape counted as collapse; " + f.note;
  } else if (diverged && twin.collapse.absorbing &&
      dynsys::is_collapsed(f.trajectory.samples, twin.collapse)) {
    f.status = PredictionStatus::collapsed;
    f.note = "collapse threshold crossed before blow-up; " + f.note;
  } else if (diverged) {
    f.status = PredictionStatus::diverged;
  } else if (horizon == 0) {
    f.status = PredictionStatus::sustained;
    f.note = "insufficient data: empty forecast (horizon 0)";
  } else {
    f.status = dynsys::is_collapsed(f.trajectory.samples, twin.collapse)
                   ? PredictionStatus::collapsed
                   : PredictionStatus::sustained;
  }
  return f;
}

Samples self_predict(const TrainedTwin& twin, const Trajectory& warm,
                     std::size_t horizon) {
  return predict_at_parameter(twin, warm.param, warm, horizon).trajectory.samples;
}

}  // namespace dtwin::twin
