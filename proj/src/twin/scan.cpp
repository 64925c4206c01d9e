#include "dtwin/twin/scan.hpp"

#include <cmath>

#include "dtwin/error.hpp"
#include "dtwin/parallel.hpp"

namespace dtwin::twin {

dynsys::AttractorSummary twin_summary(const TrainedTwin& twin, double p,
                                      const RolloutSettings& settings) {
  const Forecast f = predict_at_parameter(twin, p, twin.warm,
                                          settings.transient + settings.window);
  const auto produced = f.trajectory.samples.rows();
  const auto transient = static_cast<Eigen::Index>(settings.transient);
  const dynsys::Samples window =
      produced > transient ? dynsys::Samples(f.trajectory.samples.bottomRows(
                                 produced - transient))
                           : dynsys::Samples(0, f.trajectory.samples.cols());
  dynsys::AttractorSummary s = dynsys::summarize(window, twin.collapse);
  if (f.status == PredictionStatus::diverged) {
    s.diverged = true;
    s.collapsed = false;
  } else if (twin.collapse.absorbing || twin.collapse.blow_up_collapses) {
    // A first passage inside the discarded lead-in still counts.
    s.collapsed = f.status == PredictionStatus::collapsed;
  }
  return s;
}

dynsys::BifurcationDiagram scan_bifurcation(const TrainedTwin& twin,
                                            const std::vector<double>& grid,
                                            const RolloutSettings& settings) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      fail(ErrorKind::invalid_input, "scan: grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      fail(ErrorKind::invalid_input, "scan: grid must be strictly increasing");
  }
  dynsys::BifurcationDiagram d;
  d.source = dynsys::DiagramSource::twin;
  d.variable_names = twin.variable_names;
  d.entries.resize(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        d.entries[i] = {grid[i], twin_summary(twin, grid[i], settings)};
      },
      settings.threads);
  return d;
}

}  // namespace dtwin::twin
