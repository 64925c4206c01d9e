#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dtwin::reservoir {

/// Hyperparameters of a parameter-aware echo state network.
struct ReservoirConfig {
  std::size_t size = 600;         // neurons N
  std::size_t input_dim = 3;      // M
  std::size_t output_dim = 3;     // L
  double spectral_radius = 0.9;
  double density = 0.02;          // share of nonzero recurrent weights
  double input_scaling = 0.5;     // W_in ~ U[-s, s]
  double param_scaling = 0.5;     // W_p ~ U[-s, s]
  double bias_scaling = 0.2;      // b ~ U[-s, s]
  double leak_rate = 1.0;         // alpha in (0, 1]
  double ridge = 1e-6;            // beta >= 0
  double input_noise = 0.0;       // training inputs jittered by U[-s, s]
  std::size_t warmup = 500;       // samples discarded before fitting
  std::uint64_t seed = 0;

  /// Throws config errors for hard violations (including M != L).
  void validate() const;

  /// Soft findings, e.g. a reservoir that is not much larger than the input.
  std::vector<std::string> warnings() const;
};

}  // namespace dtwin::reservoir
