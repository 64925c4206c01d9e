#include "dtwin/twin/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtwin/error.hpp"
#include "dtwin/rng.hpp"
#include "dtwin/twin/metrics.hpp"
#include "dtwin/twin/twin.hpp"

namespace dtwin::twin {

namespace {

double draw(Rng& rng, const Range& r) {
  if (r.log) return std::pow(10.0, rng.uniform(std::log10(r.lo), std::log10(r.hi)));
  return rng.uniform(r.lo, r.hi);
}

struct Split {
  TimeSeriesSet fit;
  std::vector<dynsys::Trajectory> validation;
  std::vector<Eigen::VectorXd> scales;
};

Split split_data(const TimeSeriesSet& data, double fraction) {
  Split s;
  s.fit = data;
  s.fit.trajectories.clear();
  s.fit.present = {};
  for (const auto& t : data.trajectories) {
    const auto n_val = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(t.size())));
    if (n_val < 1 || n_val + 2 > t.size())
      fail(ErrorKind::invalid_input,
           "hyperparameter search: trajectory too short to split");
    s.fit.trajectories.push_back(t.slice(0, t.size() - n_val));
    s.validation.push_back(t.slice(t.size() - n_val, n_val));
    s.scales.push_back(channel_std(t.samples));
  }
  return s;
}

double score(const Split& split, const reservoir::ReservoirConfig& cfg,
             std::size_t horizon) {
  try {
    const TrainedTwin twin = train_twin(split.fit, cfg);
    double total = 0.0;
    for (std::size_t k = 0; k < split.validation.size(); ++k) {
      const auto& fit = split.fit.trajectories[k];
      const auto& val = split.validation[k];
      const std::size_t warm_len = std::min(fit.size(), std::max<std::size_t>(cfg.warmup, 1));
      const auto warm = fit.slice(fit.size() - warm_len, warm_len);
      const std::size_t h = std::min(horizon, val.size());
      const Forecast f = predict_at_parameter(twin, fit.param, warm, h);
      if (f.status == PredictionStatus::diverged ||
          f.trajectory.size() != h)
        return std::numeric_limits<double>::infinity();
      total += nrmse(f.trajectory.samples,
                     val.samples.topRows(static_cast<Eigen::Index>(h)),
                     split.scales[k]);
    }
    const double mean = total / static_cast<double>(split.validation.size());
    return std::isfinite(mean) ? mean : std::numeric_limits<double>::infinity();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::rank_deficiency || e.kind() == ErrorKind::numerical ||
        e.kind() == ErrorKind::divergence ||
        e.kind() == ErrorKind::degenerate_reservoir)
      return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace

SearchResult optimize_hyperparameters(const TimeSeriesSet& data,
                                      const reservoir::ReservoirConfig& base,
                                      const SearchSpace& space,
                                      const SearchSettings& settings) {
  if (settings.budget < 1)
    fail(ErrorKind::invalid_input, "hyperparameter search: budget must be >= 1");
  if (!(settings.validation_fraction > 0.0 && settings.validation_fraction < 1.0))
    fail(ErrorKind::invalid_input,
         "hyperparameter search: validation fraction must lie in (0, 1)");
  base.validate();
  const Split split = split_data(data, settings.validation_fraction);

  Rng rng(settings.seed);
  SearchResult result;
  for (std::size_t i = 0; i < settings.budget; ++i) {
    reservoir::ReservoirConfig cfg = base;
    if (i > 0) {
      cfg.spectral_radius = draw(rng, space.spectral_radius);
      cfg.input_scaling = draw(rng, space.input_scaling);
      cfg.param_scaling = draw(rng, space.param_scaling);
      cfg.leak_rate = std::min(1.0, draw(rng, space.leak_rate));
      cfg.ridge = draw(rng, space.ridge);
    }
    result.leaderboard.push_back({i, cfg, score(split, cfg, settings.horizon)});
  }
  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                     return a.score < b.score;
                   });
  result.best = result.leaderboard.front().config;
  return result;
}

}  // namespace dtwin::twin
