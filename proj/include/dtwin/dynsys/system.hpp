#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/trajectory.hpp"

namespace dtwin::dynsys {

enum class SystemKind { discrete_map, continuous_ode };

const char* to_string(SystemKind kind) noexcept;

/// Map image (discrete) or vector field (continuous) at parameter p.
using Evaluator =
    std::function<void(std::span<const double> state, double p,
                       std::span<double> out)>;

/// A dynamical system with one named bifurcation parameter.
struct SystemSpec {
  std::string name;
  SystemKind kind = SystemKind::discrete_map;
  std::size_t dimension = 0;
  std::string parameter_name;
  std::map<std::string, double> fixed_params;
  /// Time per recorded sample (1 for maps).
  double sampling_interval = 1.0;
  /// Default integrator step for ODEs.
  double step = 1.0;
  /// Clamp tiny negative components to zero after each step (populations).
  bool non_negative = false;
  std::vector<std::string> variable_names;
  Eigen::VectorXd initial_state;
  CollapseCriterion collapse;
  Evaluator evaluate;

  void validate() const;
};

/// Built-in systems: "ikeda", "food_chain" and "oscillator" (harmonic
/// oscillator x' = omega y, y' = -omega x, used for sine-wave data).
/// `overrides` replaces fixed parameters or integration settings by name;
/// unknown names are a config error.
SystemSpec make_system(const std::string& name,
                       const std::map<std::string, double>& overrides = {});

std::vector<std::string> builtin_system_names();

/// Runs the system for `duration` time units starting at `initial`, recording
/// one sample every sampling interval (duration / interval + 1 rows). ODEs use
/// fixed-step RK4 with step `dt`; maps iterate exactly and ignore `dt`.
/// Throws DivergenceError on non-finite states.
Trajectory integrate(const SystemSpec& spec, const Eigen::VectorXd& initial,
                     double p, double duration, double dt, double t0 = 0.0);

/// Same dynamics as integrate() without recording; returns the final state.
Eigen::VectorXd advance(const SystemSpec& spec, const Eigen::VectorXd& initial,
                        double p, double duration, double dt);

/// Single fixed RK4 step of an autonomous vector field (exposed for tests).
void rk4_step(const Evaluator& f, std::span<double> state, double p, double dt,
              std::span<double> scratch);

}  // namespace dtwin::dynsys
