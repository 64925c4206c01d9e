#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dtwin/dynsys/system.hpp"
#include "dtwin/error.hpp"
#include "dtwin/parallel.hpp"
#include "dtwin/twin/detect.hpp"
#include "dtwin/twin/hyperopt.hpp"
#include "dtwin/twin/metrics.hpp"
#include "dtwin/twin/plan.hpp"
#include "dtwin/twin/scan.hpp"
#include "dtwin/twin/twin.hpp"

using namespace dtwin;
using namespace dtwin::twin;
using dynsys::Samples;

namespace {

const TimeSeriesSet& sine_data() {
  static const TimeSeriesSet data = [] {
    TrainingPlan plan;
    plan.system = dynsys::make_system("oscillator");
    plan.train_params = {0.8, 1.0, 1.2};
    plan.samples_per_param = 2000;
    plan.transient = 50;
    return assemble_training_data(plan);
  }();
  return data;
}

reservoir::ReservoirConfig sine_config(std::uint64_t seed = 1) {
  reservoir::ReservoirConfig c;
  c.size = 150;
  c.input_dim = 2;
  c.output_dim = 2;
  c.density = 0.05;
  c.spectral_radius = 0.8;
  c.input_scaling = 0.5;
  c.param_scaling = 0.3;
  c.ridge = 1e-8;
  c.warmup = 200;
  c.seed = seed;
  return c;
}

dynsys::BifurcationDiagram flags(const std::vector<int>& collapsed,
                                 const std::vector<int>& diverged = {}) {
  dynsys::BifurcationDiagram d;
  d.parameter_name = "p";
  d.variable_names = {"x"};
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    dynsys::DiagramEntry e;
    e.param = 0.1 * static_cast<double>(i);
    e.summary.variables.resize(1);
    e.summary.collapsed = collapsed[i] != 0;
    e.summary.diverged = i < diverged.size() && diverged[i] != 0;
    d.entries.push_back(e);
  }
  return d;
}

}  // namespace

TEST_CASE("training plan validation") {
  TrainingPlan plan;
  plan.system = dynsys::make_system("oscillator");
  CHECK_THROWS_AS(plan.validate(), Error);
  plan.train_params = {1.0, 0.9};
  CHECK_THROWS_AS(plan.validate(), Error);
  plan.train_params = {0.9, 1.0};
  CHECK_NOTHROW(plan.validate());
  CHECK(plan.present() == 1.0);
}

TEST_CASE("collapsed training parameter is an invalid plan") {
  TrainingPlan plan;
  plan.system = dynsys::make_system("food_chain");
  plan.train_params = {0.98, 1.1};
  plan.samples_per_param = 500;
  plan.transient = 3000;
  try {
    assemble_training_data(plan);
    FAIL("expected invalid_plan");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_plan);
    CHECK(std::string(e.what()).find("K=1.1") != std::string::npos);
  }
}

TEST_CASE("training data layout") {
  const TimeSeriesSet& d = sine_data();
  CHECK(d.trajectories.size() == 3);
  CHECK(d.params() == std::vector<double>{0.8, 1.0, 1.2});
  CHECK(d.present.param == 1.2);
  CHECK(d.trajectories[0].size() == 2000);
  CHECK(d.dimension() == 2);
}

TEST_CASE("training is bitwise deterministic") {
  const TrainedTwin a = train_twin(sine_data(), sine_config());
  const TrainedTwin b = train_twin(sine_data(), sine_config());
  CHECK(a.readout.weights == b.readout.weights);
  CHECK(a.residual == b.residual);
  CHECK(a.warm.samples == b.warm.samples);
  const TrainedTwin c = train_twin(sine_data(), sine_config(2));
  CHECK(a.readout.weights != c.readout.weights);
}

TEST_CASE("input noise jitters the drive, not the targets") {
  reservoir::ReservoirConfig c = sine_config();
  c.input_noise = 1e-3;
  const TrainedTwin a = train_twin(sine_data(), c);
  const TrainedTwin b = train_twin(sine_data(), c);
  CHECK(a.readout.weights == b.readout.weights);
  const TrainedTwin clean = train_twin(sine_data(), sine_config());
  CHECK(a.readout.weights != clean.readout.weights);
  CHECK(a.residual > clean.residual);
  c.input_noise = -1.0;
  CHECK_THROWS_AS(train_twin(sine_data(), c), Error);
}

TEST_CASE("sine twin forecasts the near future") {
  const TrainedTwin t = train_twin(sine_data(), sine_config());
  CHECK(t.residual < 1e-3);
  for (const auto& traj : sine_data().trajectories) {
    const auto warm = traj.slice(0, 1000);
    const auto truth = traj.slice(1000, 100);
    const Samples pred = self_predict(t, warm, 100);
    CHECK(nrmse(pred, truth.samples, channel_std(traj.samples)) < 0.1);
  }
}

TEST_CASE("prediction statuses") {
  const TrainedTwin t = train_twin(sine_data(), sine_config());
  const Forecast none = predict_at_parameter(t, 1.2, t.warm, 0);
  CHECK(none.status == PredictionStatus::sustained);
  CHECK(none.trajectory.size() == 0);
  CHECK(none.note.find("horizon 0") != std::string::npos);

  const Forecast f = predict_at_parameter(t, 1.2, t.warm, 500);
  CHECK(f.status == PredictionStatus::sustained);
  CHECK(f.trajectory.size() == 500);
  CHECK(f.trajectory.t0 == doctest::Approx(t.warm.time(t.warm.size() - 1) + 0.2));

  CHECK_THROWS_AS(predict_at_parameter(t, NAN, t.warm, 5), Error);
}

TEST_CASE("twin scan") {
  const TrainedTwin t = train_twin(sine_data(), sine_config());
  RolloutSettings st;
  st.transient = 100;
  st.window = 200;
  st.threads = 1;
  const auto one = scan_bifurcation(t, {1.0}, st);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.source == dynsys::DiagramSource::twin);
  const auto serial = scan_bifurcation(t, {0.8, 1.0, 1.2}, st);
  st.threads = 3;
  const auto threaded = scan_bifurcation(t, {0.8, 1.0, 1.2}, st);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(serial.entries[i].summary.variables[0].mean ==
          threaded.entries[i].summary.variables[0].mean);
    CHECK(serial.entries[i].summary.variables[1].extrema ==
          threaded.entries[i].summary.variables[1].extrema);
  }
  CHECK_THROWS_AS(scan_bifurcation(t, {1.0, 0.9}, st), Error);
}

TEST_CASE("trajectory-mode detection of a synthetic decay") {
  dynsys::CollapseCriterion c;
  c.variable = 2;
  c.threshold = 1e-4;
  dynsys::Trajectory traj;
  traj.dt = 1.0;
  traj.samples.resize(10000, 3);
  for (Eigen::Index k = 0; k < 10000; ++k) {
    const double p = k < 5000 ? 0.5 + 0.3 * std::sin(0.1 * k)
                              : 0.5 * std::exp(-(k - 5000) / 100.0);
    traj.samples.row(k) << 0.7, 0.3, p;
  }
  const TransitionReport r = detect_transition(traj, c);
  REQUIRE(r.kind == TransitionKind::collapse);
  CHECK(*r.onset_index >= 4500);
  CHECK(*r.onset_index <= 6000);

  // Rescaling time stretches the onset time, not the index or the verdict.
  dynsys::Trajectory slow = traj;
  slow.dt = 0.25;
  slow.t0 = 3.0;
  const TransitionReport s = detect_transition(slow, c);
  CHECK(s.kind == TransitionKind::collapse);
  CHECK(*s.onset_index == *r.onset_index);
  CHECK(*s.onset_time == doctest::Approx(3.0 + 0.25 * *r.onset_time));

  // Rescaling the other variables changes nothing.
  dynsys::Trajectory scaled = traj;
  scaled.samples.leftCols(2) *= 40.0;
  CHECK(*detect_transition(scaled, c).onset_index == *r.onset_index);

  // A decay that recovers is not a collapse.
  dynsys::Trajectory rec = traj;
  rec.samples.col(2).tail(100).setConstant(0.4);
  CHECK(detect_transition(rec, c).kind == TransitionKind::none);

  CHECK(detect_transition(dynsys::Trajectory{}, c).kind == TransitionKind::none);
  dynsys::Trajectory nan = traj;
  nan.samples(20, 0) = NAN;
  CHECK(detect_transition(nan, c).kind == TransitionKind::diverged);
}

TEST_CASE("diagram-mode detection") {
  const auto single = detect_transition(flags({0, 0, 0, 1, 1, 1}));
  REQUIRE(single.kind == TransitionKind::collapse);
  CHECK(single.bracket->lo == doctest::Approx(0.2));
  CHECK(single.bracket->hi == doctest::Approx(0.3));
  CHECK_FALSE(single.lo_collapsed);
  CHECK(single.evidence.size() == 6);

  const auto none = detect_transition(flags({0, 0, 0}));
  CHECK(none.kind == TransitionKind::none);
  CHECK_FALSE(none.bracket);

  const auto multi = detect_transition(flags({0, 1, 0, 1}));
  REQUIRE(multi.bracket);
  CHECK(multi.bracket->hi == doctest::Approx(0.1));
  bool warned = false;
  for (const auto& n : multi.notes) warned = warned || n.find("warning") != std::string::npos;
  CHECK(warned);

  const auto skip = detect_transition(flags({0, 0, 0, 1}, {0, 0, 1, 0}));
  REQUIRE(skip.bracket);
  CHECK(skip.bracket->lo == doctest::Approx(0.1));
  CHECK(skip.bracket->hi == doctest::Approx(0.3));

  const auto all = detect_transition(flags({1, 1}));
  CHECK(all.kind == TransitionKind::collapse);
  CHECK_FALSE(all.bracket);

  CHECK(detect_transition(flags({0, 0}, {1, 1})).kind == TransitionKind::diverged);
  CHECK(detect_transition(flags({})).kind == TransitionKind::none);
}

TEST_CASE("bisection keeps a shrinking nested bracket") {
  const double pc = 0.7316;
  Bracket b{0.5, 1.0};
  std::vector<Bracket> seen{b};
  for (int i = 0; i < 20; ++i) {
    const Bracket next = bisect_bracket(seen.back(), false,
                                        [&](double p) { return p > pc; }, 1);
    CHECK(next.width() == doctest::Approx(0.5 * seen.back().width()));
    CHECK(next.lo >= seen.back().lo);
    CHECK(next.hi <= seen.back().hi);
    CHECK(next.lo <= pc);
    CHECK(next.hi >= pc);
    seen.push_back(next);
  }
  const Bracket rev = bisect_bracket({0.0, 1.0}, true, [&](double p) { return p < pc; }, 30);
  CHECK(rev.lo <= pc);
  CHECK(rev.hi >= pc);
  CHECK(rev.width() < 1e-8);
  CHECK(bisect_bracket({0, 1}, false, [](double) { return true; }, 0).width() == 1.0);
  CHECK_THROWS_AS(bisect_bracket({1, 1}, false, [](double) { return true; }, 3), Error);
}

TEST_CASE("hyperparameter search") {
  const auto base = sine_config();
  SearchSettings s;
  s.budget = 4;
  s.seed = 77;
  s.horizon = 20;
  const SearchResult a = optimize_hyperparameters(sine_data(), base, {}, s);
  const SearchResult b = optimize_hyperparameters(sine_data(), base, {}, s);
  REQUIRE(a.leaderboard.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a.leaderboard[i].candidate == b.leaderboard[i].candidate);
    CHECK(a.leaderboard[i].score == b.leaderboard[i].score);
    CHECK(a.leaderboard[i].config.spectral_radius ==
          b.leaderboard[i].config.spectral_radius);
  }
  double base_score = 0.0;
  for (const auto& e : a.leaderboard)
    if (e.candidate == 0) base_score = e.score;
  CHECK(a.leaderboard.front().score <= base_score);
  CHECK(a.best.spectral_radius == a.leaderboard.front().config.spectral_radius);

  s.budget = 1;
  const SearchResult one = optimize_hyperparameters(sine_data(), base, {}, s);
  REQUIRE(one.leaderboard.size() == 1);
  CHECK(one.leaderboard[0].candidate == 0);
  CHECK(one.best.spectral_radius == base.spectral_radius);
  CHECK(one.best.ridge == base.ridge);

  s.budget = 0;
  CHECK_THROWS_AS(optimize_hyperparameters(sine_data(), base, {}, s), Error);
}

TEST_CASE("metrics") {
  Samples a(4, 2);
  a << 1, 2, 3, 4, 5, 6, 7, 8;
  CHECK(nrmse(a, a, Eigen::Vector2d(1, 1)) == 0.0);
  Samples b = a;
  b.col(0).array() += 2.0;
  CHECK(nrmse(b, a, Eigen::Vector2d(2, 1)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(channel_std(a)[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(nrmse(a, a.topRows(2), Eigen::Vector2d(1, 1)), Error);

  dynsys::Trajectory s;
  s.dt = 0.05;
  s.samples.resize(4000, 1);
  for (Eigen::Index i = 0; i < 4000; ++i) s.samples(i, 0) = std::sin(0.05 * i);
  CHECK(mean_oscillation_period(s, 0) == doctest::Approx(2 * M_PI).epsilon(0.01));
}

TEST_CASE("parallel_for fills slots and rethrows the lowest failure") {
  std::vector<int> out(100);
  parallel_for(100, [&](std::size_t i) { out[i] = static_cast<int>(i * i); }, 4);
  for (int i = 0; i < 100; ++i) CHECK(out[i] == i * i);
  try {
    parallel_for(
        50,
        [](std::size_t i) {
          if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        },
        4);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}
