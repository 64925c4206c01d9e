#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtwin/dynsys/oracle.hpp"
#include "dtwin/dynsys/system.hpp"
#include "dtwin/reservoir/config.hpp"
#include "dtwin/twin/hyperopt.hpp"
#include "dtwin/twin/plan.hpp"
#include "dtwin/twin/scan.hpp"

namespace dtwin::io {

/// Parsed `[section]` / `key = value` text. Keys keep file order.
struct ConfigText {
  std::map<std::string, std::map<std::string, std::string>> sections;
};

ConfigText parse_config_text(const std::string& text);

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  std::vector<double> values() const;
};

/// `lo:hi:n` with n >= 1 and lo <= hi (lo < hi when n > 1).
GridSpec parse_grid(const std::string& s);
std::string format_grid(const GridSpec& g);

struct SystemSection {
  std::optional<std::string> name;
  std::map<std::string, double> params;  // fixed parameters and step sizes
  std::optional<Eigen::VectorXd> initial;
  std::optional<std::string> collapse_mode;
  std::optional<std::size_t> collapse_variable;
  std::optional<double> collapse_threshold;
  std::optional<double> collapse_fraction;
  std::optional<bool> collapse_absorbing;
  std::optional<bool> blow_up_collapses;
  std::optional<double> blow_up_norm;
  // simulate
  double param = 1.0;
  double duration = 1000.0;
  double transient = 0.0;
};

struct TwinSection {
  std::vector<double> train_params;
  std::optional<double> present_param;
  std::optional<double> declared_critical;
  std::size_t samples_per_param = 10000;
  double transient = 1e4;
  GridSpec grid{0.0, 1.0, 20};
  std::size_t scan_transient = 10000;
  std::size_t scan_window = 4000;
  double oracle_transient = 1e4;
  double oracle_window = 4e3;
  std::size_t refine_iterations = 0;
  std::size_t horizon = 4000;
  std::size_t search_budget = 0;
  std::size_t search_horizon = 20;
};

struct IoSection {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  unsigned threads = 0;
};

/// Every setting of a run. Unknown sections or keys are config errors.
struct RunConfig {
  SystemSection system;
  reservoir::ReservoirConfig reservoir;
  TwinSection twin;
  IoSection io;

  /// Builds the system named in [system]; usage error if none is named.
  dynsys::SystemSpec make_system() const;
  twin::TrainingPlan make_plan() const;
  /// Reservoir config with dimensions from the system and the seed split
  /// from the master seed.
  reservoir::ReservoirConfig reservoir_for(const dynsys::SystemSpec& s) const;
  dynsys::ScanSettings oracle_settings() const;
  twin::RolloutSettings rollout_settings() const;
  std::uint64_t require_seed() const;
};

/// Defaults: io.out comes from DTWIN_OUT when set.
RunConfig default_run_config();

/// Applies `text` on top of `base`.
RunConfig parse_run_config(const std::string& text, RunConfig base);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies a single `section.key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Canonical text of every effective setting (reparses to the same config).
std::string run_config_to_text(const RunConfig& cfg);

}  // namespace dtwin::io
