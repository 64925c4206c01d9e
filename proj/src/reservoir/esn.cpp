#include "dtwin/reservoir/esn.hpp"

#include <sstream>

#include "dtwin/error.hpp"

namespace dtwin::reservoir {

void update(const ReservoirMatrices& mats, double leak_rate,
            Eigen::Ref<Eigen::VectorXd> r,
            const Eigen::Ref<const Eigen::VectorXd>& u, double p) {
  Eigen::VectorXd pre = mats.recurrent * r;
  pre.noalias() += mats.input * u;
  pre += p * mats.param + mats.bias;
  if (leak_rate == 1.0) {
    r = pre.array().tanh().matrix();
  } else {
    r = (1.0 - leak_rate) * r + leak_rate * pre.array().tanh().matrix();
  }
}

Samples drive_open_loop(const ReservoirMatrices& mats,
                        const ReservoirConfig& config, ReservoirState& r0,
                        const Samples& inputs, double p) {
  if (static_cast<std::size_t>(inputs.cols()) != config.input_dim ||
      static_cast<std::size_t>(mats.input.cols()) != config.input_dim)
    fail(ErrorKind::invalid_input, "drive_open_loop: input dimension mismatch");
  if (static_cast<std::size_t>(r0.r.size()) != mats.size())
    fail(ErrorKind::invalid_input, "drive_open_loop: state size mismatch");
  if (!inputs.allFinite() || !std::isfinite(p))
    fail(ErrorKind::invalid_input, "drive_open_loop: non-finite input");

  Samples states(inputs.rows(), static_cast<Eigen::Index>(mats.size()));
  Eigen::VectorXd u(inputs.cols());
  for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
    u = inputs.row(t).transpose();
    update(mats, config.leak_rate, r0.r, u, p);
    states.row(t) = r0.r.transpose();
    ++r0.t;
  }
  return states;
}

ClosedLoopStep step_closed_loop(const ReservoirMatrices& mats,
                                const ReservoirConfig& config,
                                const Readout& readout,
                                const ReservoirState& r, double p) {
  if (config.input_dim != config.output_dim)
    fail(ErrorKind::config, "closed loop requires matching input and output");
  ClosedLoopStep step{r, readout.apply(r.r)};
  if (!step.output.allFinite()) {
    std::ostringstream msg;
    msg << "twin output diverged at step " << r.t;
    throw DivergenceError(msg.str(), static_cast<double>(r.t), p);
  }
  update(mats, config.leak_rate, step.state.r, step.output, p);
  ++step.state.t;
  return step;
}

}  // namespace dtwin::reservoir
