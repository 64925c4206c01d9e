#include <doctest.h>

#include <cmath>
#include <complex>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/food_chain.hpp"
#include "dtwin/dynsys/ikeda.hpp"
#include "dtwin/dynsys/oracle.hpp"
#include "dtwin/dynsys/system.hpp"
#include "dtwin/error.hpp"
#include "dtwin/rng.hpp"

using namespace dtwin;
using namespace dtwin::dynsys;

TEST_CASE("ikeda real arithmetic matches the complex form") {
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    IkedaParams p;
    p.mu = rng.uniform(0.5, 1.2);
    p.gamma = rng.uniform(0.0, 0.99);
    p.kappa = rng.uniform(-1.0, 1.0);
    p.nu = rng.uniform(0.0, 10.0);
    const IkedaState s{rng.uniform(-6, 6), rng.uniform(-6, 6)};
    const std::complex<double> z(s.x, s.y);
    const std::complex<double> i1(0.0, 1.0);
    const std::complex<double> next =
        p.mu + p.gamma * z * std::exp(i1 * (p.kappa - p.nu / (1.0 + std::norm(z))));
    const IkedaState got = ikeda_step(s, p);
    worst = std::max(worst, std::abs(got.x - next.real()));
    worst = std::max(worst, std::abs(got.y - next.imag()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("ikeda orbits stay in the absorbing disk") {
  IkedaParams p;
  p.mu = 0.9;
  IkedaState s{0.0, 0.0};
  for (int n = 0; n < 20000; ++n) {
    s = ikeda_step(s, p);
    REQUIRE(std::hypot(s.x, s.y) <= ikeda_bound(p) + 1e-12);
  }
}

TEST_CASE("ikeda rejects bad input") {
  IkedaParams p;
  CHECK_THROWS_AS(ikeda_step({NAN, 0.0}, p), Error);
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("food chain fixed points are exact") {
  FoodChainParams p;
  for (double K : {0.9, 0.98, 1.1}) {
    p.K = K;
    const auto origin = food_chain_rhs({0.0, 0.0, 0.0}, p);
    const auto resource_only = food_chain_rhs({K, 0.0, 0.0}, p);
    for (int j = 0; j < 3; ++j) {
      CHECK(origin[j] == 0.0);
      CHECK(resource_only[j] == 0.0);
    }
  }
  CHECK_THROWS_AS(food_chain_rhs({-0.1, 0.2, 0.3}, p), Error);
}

TEST_CASE("rk4 error drops sixteenfold when the step halves") {
  const SystemSpec spec = make_system("food_chain");
  const Eigen::VectorXd x0 = spec.initial_state;
  auto final_state = [&](double dt) {
    return advance(spec, x0, 0.98, 10.0, dt);
  };
  const Eigen::VectorXd ref = final_state(1.0 / 1024.0);
  const double e1 = (final_state(0.1) - ref).norm();
  const double e2 = (final_state(0.05) - ref).norm();
  const double ratio = e1 / e2;
  INFO("ratio = " << ratio);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("rk4 reproduces the logistic closed form") {
  const Evaluator logistic = [](std::span<const double> x, double r,
                                std::span<double> out) {
    out[0] = r * x[0] * (1.0 - x[0]);
  };
  double state[1] = {0.1};
  double scratch[5];
  const double dt = 0.01;
  double worst = 0.0;
  for (int n = 1; n <= 1000; ++n) {
    rk4_step(logistic, state, 1.0, dt, scratch);
    const double t = n * dt;
    const double exact = 1.0 / (1.0 + (1.0 / 0.1 - 1.0) * std::exp(-t));
    worst = std::max(worst, std::abs(state[0] - exact));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("integrate sample count and determinism") {
  const SystemSpec ik = make_system("ikeda");
  const Trajectory a = integrate(ik, ik.initial_state, 0.9, 100.0, 1.0);
  CHECK(a.size() == 101);
  const Trajectory b = integrate(ik, ik.initial_state, 0.9, 100.0, 1.0);
  CHECK(a.samples == b.samples);

  const SystemSpec fc = make_system("food_chain");
  const Trajectory c = integrate(fc, fc.initial_state, 0.98, 500.0, 0.01);
  CHECK(c.size() == 501);
  CHECK(c.samples.minCoeff() >= 0.0);
  CHECK(c.samples.col(0).maxCoeff() <= 0.98 + 1e-12);
  CHECK(c.samples.allFinite());
}

TEST_CASE("make_system rejects unknown names and parameters") {
  CHECK_THROWS_AS(make_system("lorenz"), Error);
  CHECK_THROWS_AS(make_system("ikeda", {{"gama", 0.5}}), Error);
  CHECK(make_system("ikeda", {{"gamma", 0.5}}).fixed_params.at("gamma") == 0.5);
  CHECK_THROWS_AS(make_system("ikeda", {{"sampling_interval", 2.0}}), Error);
}

TEST_CASE("integrate reports divergence") {
  const SystemSpec osc = make_system("oscillator", {{"step", 0.2}});
  CHECK_THROWS_AS(integrate(osc, osc.initial_state, 50.0, 2000.0, 0.2),
                  DivergenceError);
}

TEST_CASE("collapse criteria") {
  CollapseCriterion below;
  below.variable = 1;
  below.threshold = 1e-4;
  Samples w = Samples::Ones(100, 2);
  CHECK_FALSE(is_collapsed(w, below));
  w.col(1).tail(25).setConstant(1e-6);
  CHECK(is_collapsed(w, below));
  CHECK(*collapse_onset(w, below) == 75);
  w.col(1).tail(25).setConstant(-0.3);  // negative counts as below
  CHECK(is_collapsed(w, below));
  CHECK_FALSE(is_collapsed(Samples(0, 2), below));

  CollapseCriterion fixed;
  fixed.mode = CollapseCriterion::Mode::fixed_point;
  fixed.threshold = 1e-3;
  Samples period2(200, 2);
  for (Eigen::Index i = 0; i < 200; ++i) period2.row(i) << (i % 2 ? 0.2 : 0.7), 0.1;
  CHECK_FALSE(is_collapsed(period2, fixed));
  period2.bottomRows(60).rowwise() = Eigen::RowVector2d(0.3, 0.4);
  CHECK(is_collapsed(period2, fixed));

  CollapseCriterion absorbing = below;
  absorbing.absorbing = true;
  Samples dip = Samples::Ones(100, 2);
  dip(40, 1) = -2.0;  // one excursion, then recovery
  CHECK_FALSE(is_collapsed(dip, below));
  CHECK(is_collapsed(dip, absorbing));
  CHECK(*collapse_onset(dip, absorbing) == 40);

  CollapseCriterion escape = fixed;
  escape.blow_up_norm = 3.0;
  Samples far(50, 2);
  for (Eigen::Index i = 0; i < 50; ++i) far.row(i) << (i % 2 ? 0.2 : 0.7), 0.1;
  far(10, 0) = 5.0;
  CHECK(summarize(far, fixed).collapsed == false);
  CHECK(summarize(far, escape).diverged);
  escape.blow_up_collapses = true;
  CHECK(summarize(far, escape).collapsed);
  CHECK_FALSE(summarize(far, escape).diverged);

  CollapseCriterion bad = below;
  bad.variable = 5;
  CHECK_THROWS_AS(bad.validate(2), Error);
  CHECK(std::string(to_string(collapse_mode_from_string("fixed_point"))) ==
        "fixed_point");
}

TEST_CASE("per-system collapse designations") {
  const SystemSpec fc = make_system("food_chain");
  CHECK(fc.collapse.absorbing);
  CHECK_FALSE(fc.collapse.blow_up_collapses);
  const SystemSpec ik = make_system("ikeda");
  CHECK(ik.collapse.blow_up_collapses);
  // The escape radius lies outside the chaotic attractor before the crisis.
  const Trajectory a = integrate(ik, ik.initial_state, 1.0, 20000.0, 1.0);
  CHECK(a.samples.rowwise().norm().maxCoeff() < ik.collapse.blow_up_norm);
  const Trajectory b = integrate(ik, ik.initial_state, 1.05, 2000.0, 1.0);
  CHECK(b.samples.rowwise().norm().maxCoeff() > ik.collapse.blow_up_norm);
}

TEST_CASE("summaries of a period-2 signal") {
  CollapseCriterion c;
  c.mode = CollapseCriterion::Mode::fixed_point;
  c.threshold = 1e-3;
  Samples x(400, 1);
  for (Eigen::Index i = 0; i < 400; ++i) x(i, 0) = i % 2 ? -0.5 : 1.5;
  const AttractorSummary s = summarize(x, c);
  CHECK(s.variables[0].min == -0.5);
  CHECK(s.variables[0].max == 1.5);
  CHECK(s.variables[0].mean == doctest::Approx(0.5));
  CHECK(s.variables[0].amplitude() == 2.0);
  CHECK(s.variables[0].extrema.size() <= kMaxExtrema);
  for (double e : s.variables[0].extrema) CHECK(e == 1.5);
  CHECK_FALSE(s.collapsed);

  Samples flat = Samples::Constant(50, 1, 0.25);
  const AttractorSummary f = summarize(flat, c);
  CHECK(f.collapsed);
  REQUIRE(f.variables[0].extrema.size() == 1);
  CHECK(f.variables[0].extrema[0] == 0.25);

  Samples broken = Samples::Ones(10, 1);
  broken(6, 0) = NAN;
  const AttractorSummary d = summarize(broken, c);
  CHECK(d.diverged);
  CHECK(d.samples == 6);
  CHECK_FALSE(d.collapsed);
}

TEST_CASE("linear grid") {
  const auto g = linear_grid(0.9, 1.2, 20);
  CHECK(g.size() == 20);
  CHECK(g.front() == 0.9);
  CHECK(g.back() == 1.2);
  CHECK(linear_grid(0.5, 0.5, 1) == std::vector<double>{0.5});
}

TEST_CASE("ikeda default range has chaos and a crisis") {
  const SystemSpec ik = make_system("ikeda");
  CHECK(largest_lyapunov_exponent(ik, 0.9, 1000, 20000) > 0.2);
  CHECK(largest_lyapunov_exponent(ik, 0.6, 1000, 5000) < 0.0);
  ScanSettings st;
  st.transient = 1e4;
  st.window = 2000;
  st.threads = 1;
  const auto grid = linear_grid(0.85, 1.10, 26);
  const BifurcationDiagram d = oracle_bifurcation_scan(ik, grid, st);
  const auto flip = first_flip(d);
  REQUIRE(flip.has_value());
  CHECK(grid[*flip - 1] < 1.01);
  CHECK(grid[*flip] > 1.0);
  for (std::size_t i = *flip; i < grid.size(); ++i) CHECK(d.entries[i].summary.collapsed);

  st.threads = 3;
  const BifurcationDiagram d3 = oracle_bifurcation_scan(ik, grid, st);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(d3.entries[i].summary.variables[0].extrema ==
          d.entries[i].summary.variables[0].extrema);
}

TEST_CASE("food chain default range has chaos and one collapse") {
  const SystemSpec fc = make_system("food_chain");
  CHECK(largest_lyapunov_exponent(fc, 0.98, 2000, 20000) > 0.0);
  ScanSettings st;
  st.transient = 1e4;
  st.window = 2000;
  const auto grid = linear_grid(0.90, 1.20, 20);
  const BifurcationDiagram d = oracle_bifurcation_scan(fc, grid, st);
  int flips = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    flips += d.entries[i].summary.collapsed != d.entries[i - 1].summary.collapsed;
  CHECK(flips == 1);
  const auto flip = first_flip(d);
  REQUIRE(flip.has_value());
  CHECK(grid[*flip - 1] < 1.0);
  CHECK(grid[*flip] > 1.0);
}
