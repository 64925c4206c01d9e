#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "dtwin/dynsys/trajectory.hpp"
#include "dtwin/reservoir/config.hpp"
#include "dtwin/reservoir/matrices.hpp"
#include "dtwin/reservoir/readout.hpp"

namespace dtwin::reservoir {

using dynsys::Samples;

struct ReservoirState {
  Eigen::VectorXd r;
  std::size_t t = 0;

  static ReservoirState zero(std::size_t n) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), 0};
  }
};

/// r <- (1 - a) r + a tanh(W_r r + W_in u + W_p p + b), in place.
void update(const ReservoirMatrices& mats, double leak_rate,
            Eigen::Ref<Eigen::VectorXd> r, const Eigen::Ref<const Eigen::VectorXd>& u,
            double p);

/// Drives the network with inputs (one row per sample) and returns the state
/// after each input, one row per input. `r0` is advanced to the final state.
/// Throws invalid_input for a dimension mismatch or non-finite input.
Samples drive_open_loop(const ReservoirMatrices& mats,
                        const ReservoirConfig& config, ReservoirState& r0,
                        const Samples& inputs, double p);

struct ClosedLoopStep {
  ReservoirState state;
  Eigen::VectorXd output;
};

/// Emits v = W_out r and feeds it back as the next input. Throws
/// DivergenceError when v is not finite.
ClosedLoopStep step_closed_loop(const ReservoirMatrices& mats,
                                const ReservoirConfig& config,
                                const Readout& readout,
                                const ReservoirState& r, double p);

}  // namespace dtwin::reservoir
