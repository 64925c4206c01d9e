#pragma once

#include <cstddef>
#include <vector>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/twin/twin.hpp"

namespace dtwin::twin {

struct RolloutSettings {
  std::size_t transient = 10000;  // closed-loop steps discarded
  std::size_t window = 4000;      // closed-loop steps summarized
  unsigned threads = 0;
};

/// Twin bifurcation diagram: predict_at_parameter at each grid value, warmed
/// on the twin's stored present-regime series, summarized like the oracle.
/// Divergence at a grid point is recorded in its entry.
dynsys::BifurcationDiagram scan_bifurcation(const TrainedTwin& twin,
                                            const std::vector<double>& grid,
                                            const RolloutSettings& settings);

/// Summary of one twin rollout (the per-point work of scan_bifurcation).
dynsys::AttractorSummary twin_summary(const TrainedTwin& twin, double p,
                                      const RolloutSettings& settings);

}  // namespace dtwin::twin
