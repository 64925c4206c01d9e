#pragma once

#include <cstdint>
#include <vector>

#include "dtwin/reservoir/config.hpp"
#include "dtwin/twin/plan.hpp"

namespace dtwin::twin {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool log = false;  // sample uniformly in log10
};

/// Search box for the tuned hyperparameters.
struct SearchSpace {
  Range spectral_radius{0.1, 1.5};
  Range input_scaling{0.05, 3.0, true};
  Range param_scaling{0.01, 1.0, true};
  Range leak_rate{0.05, 1.0};
  Range ridge{1e-10, 1e-3, true};
};

struct SearchSettings {
  std::size_t budget = 20;         // candidates, the base config included
  std::uint64_t seed = 0;
  double validation_fraction = 0.2;
  std::size_t horizon = 20;        // closed-loop steps scored per trajectory
};

struct LeaderboardEntry {
  std::size_t candidate = 0;
  reservoir::ReservoirConfig config;
  double score = 0.0;  // mean validation NRMSE; +inf when a fit failed
};

struct SearchResult {
  reservoir::ReservoirConfig best;
  std::vector<LeaderboardEntry> leaderboard;  // best first
};

/// Seeded random search. Candidate 0 is `base` itself; the others redraw
/// spectral radius, input and parameter scaling, leak rate and ridge. Each
/// trajectory is split in time: the leading part trains, the trailing
/// validation share scores closed-loop NRMSE over `horizon` steps.
SearchResult optimize_hyperparameters(const TimeSeriesSet& data,
                                      const reservoir::ReservoirConfig& base,
                                      const SearchSpace& space,
                                      const SearchSettings& settings);

}  // namespace dtwin::twin
