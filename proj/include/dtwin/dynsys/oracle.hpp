#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/dynsys/system.hpp"

namespace dtwin::dynsys {

struct ScanSettings {
  /// Discarded lead-in, in time units (map steps for maps).
  double transient = 1e4;
  /// Recorded window after the transient, in time units.
  double window = 4e3;
  /// Integrator step; 0 selects the system default.
  double dt = 0.0;
  /// Initial condition; empty selects the system default.
  Eigen::VectorXd initial;
  unsigned threads = 0;
};

/// Direct-simulation bifurcation diagram: for every grid value the system is
/// run from the same initial state, the transient is discarded, and the
/// window is summarized. Grid points run in parallel and are merged in grid
/// order. Divergence errors propagate tagged with the offending parameter.
BifurcationDiagram oracle_bifurcation_scan(const SystemSpec& spec,
                                           const std::vector<double>& grid,
                                           const ScanSettings& settings);

/// Post-transient trajectory at one parameter value (the oracle's raw data).
Trajectory settled_trajectory(const SystemSpec& spec, double p,
                              const ScanSettings& settings);

/// Largest Lyapunov exponent from two nearby orbits with periodic
/// renormalization (per time unit; per step for maps).
double largest_lyapunov_exponent(const SystemSpec& spec, double p,
                                 double transient, double duration,
                                 double renorm_interval = 1.0,
                                 double separation = 1e-8,
                                 const Eigen::VectorXd& initial = {});

/// Grid of `n` evenly spaced values on [lo, hi]; n == 1 yields {lo}.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Index of the first change of the collapsed flag along the diagram.
std::optional<std::size_t> first_flip(const BifurcationDiagram& d);

}  // namespace dtwin::dynsys
