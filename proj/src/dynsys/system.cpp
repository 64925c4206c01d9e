#include "dtwin/dynsys/system.hpp"

#include <cmath>
#include <sstream>

#include "dtwin/dynsys/food_chain.hpp"
#include "dtwin/dynsys/ikeda.hpp"
#include "dtwin/error.hpp"

namespace dtwin::dynsys {

const char* to_string(SystemKind kind) noexcept {
  return kind == SystemKind::discrete_map ? "discrete_map" : "continuous_ode";
}

void SystemSpec::validate() const {
  if (dimension == 0) fail(ErrorKind::config, name + ": dimension must be >= 1");
  if (static_cast<std::size_t>(initial_state.size()) != dimension)
    fail(ErrorKind::config, name + ": initial state has wrong dimension");
  if (variable_names.size() != dimension)
    fail(ErrorKind::config, name + ": variable name count != dimension");
  if (!(sampling_interval > 0.0) || !(step > 0.0))
    fail(ErrorKind::config, name + ": sampling interval and step must be > 0");
  if (kind == SystemKind::discrete_map && sampling_interval != 1.0)
    fail(ErrorKind::config, name + ": maps record every iterate (interval 1)");
  if (!evaluate) fail(ErrorKind::config, name + ": no evaluator");
  collapse.validate(dimension);
}

namespace {

double take(std::map<std::string, double>& overrides, const std::string& key,
            double fallback) {
  auto it = overrides.find(key);
  if (it == overrides.end()) return fallback;
  const double v = it->second;
  overrides.erase(it);
  return v;
}

void apply_common(SystemSpec& s, std::map<std::string, double>& overrides) {
  s.sampling_interval = take(overrides, "sampling_interval", s.sampling_interval);
  s.step = take(overrides, "step", s.step);
  if (!overrides.empty()) {
    std::ostringstream msg;
    msg << s.name << ": unknown parameter(s):";
    for (const auto& [k, v] : overrides) msg << ' ' << k;
    fail(ErrorKind::config, msg.str());
  }
  s.validate();
}

SystemSpec make_ikeda(std::map<std::string, double> overrides) {
  IkedaParams prm;
  prm.gamma = take(overrides, "gamma", prm.gamma);
  prm.kappa = take(overrides, "kappa", prm.kappa);
  prm.nu = take(overrides, "nu", prm.nu);
  prm.validate();

  SystemSpec s;
  s.name = "ikeda";
  s.kind = SystemKind::discrete_map;
  s.dimension = 2;
  s.parameter_name = "mu";
  s.fixed_params = {{"gamma", prm.gamma}, {"kappa", prm.kappa}, {"nu", prm.nu}};
  s.variable_names = {"x", "y"};
  s.initial_state = Eigen::Vector2d(0.0, 0.0);
  s.collapse.mode = CollapseCriterion::Mode::fixed_point;
  s.collapse.threshold = 1e-3;
  // Escape radius: the chaotic attractor stays inside |z| < 2.5 up to the
  // crisis, the escaping orbit passes |z| > 5 on its way to the far fixed
  // point.
  s.collapse.blow_up_norm = 3.5;
  s.collapse.blow_up_collapses = true;
  s.evaluate = [prm](std::span<const double> x, double mu,
                     std::span<double> out) {
    IkedaParams q = prm;
    q.mu = mu;
    const double theta = q.kappa - q.nu / (1.0 + x[0] * x[0] + x[1] * x[1]);
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    out[0] = q.mu + q.gamma * (x[0] * c - x[1] * sn);
    out[1] = q.gamma * (x[0] * sn + x[1] * c);
  };
  apply_common(s, overrides);
  return s;
}

SystemSpec make_food_chain(std::map<std::string, double> overrides) {
  FoodChainParams prm;
  prm.xc = take(overrides, "xc", prm.xc);
  prm.yc = take(overrides, "yc", prm.yc);
  prm.xp = take(overrides, "xp", prm.xp);
  prm.yp = take(overrides, "yp", prm.yp);
  prm.R0 = take(overrides, "R0", prm.R0);
  prm.C0 = take(overrides, "C0", prm.C0);
  prm.validate();

  SystemSpec s;
  s.name = "food_chain";
  s.kind = SystemKind::continuous_ode;
  s.dimension = 3;
  s.parameter_name = "K";
  s.fixed_params = {{"xc", prm.xc}, {"yc", prm.yc}, {"xp", prm.xp},
                    {"yp", prm.yp}, {"R0", prm.R0}, {"C0", prm.C0}};
  s.variable_names = {"R", "C", "P"};
  s.initial_state = Eigen::Vector3d(0.55, 0.35, 0.8);
  s.sampling_interval = 1.0;
  s.step = 1e-2;
  s.non_negative = true;
  s.collapse.mode = CollapseCriterion::Mode::below_threshold;
  s.collapse.variable = 2;
  s.collapse.threshold = 1e-4;
  s.collapse.absorbing = true;
  s.evaluate = [prm](std::span<const double> x, double K,
                     std::span<double> out) {
    FoodChainParams q = prm;
    q.K = K;
    const auto r = food_chain_rates(x[0], x[1], x[2], q);
    out[0] = r[0];
    out[1] = r[1];
    out[2] = r[2];
  };
  apply_common(s, overrides);
  return s;
}

SystemSpec make_oscillator(std::map<std::string, double> overrides) {
  SystemSpec s;
  s.name = "oscillator";
  s.kind = SystemKind::continuous_ode;
  s.dimension = 2;
  s.parameter_name = "omega";
  s.variable_names = {"x", "y"};
  s.initial_state = Eigen::Vector2d(1.0, 0.0);
  s.sampling_interval = 0.2;
  s.step = 1e-2;
  s.collapse.mode = CollapseCriterion::Mode::fixed_point;
  s.collapse.threshold = 1e-3;
  s.collapse.blow_up_norm = 100.0;
  s.evaluate = [](std::span<const double> x, double omega,
                  std::span<double> out) {
    out[0] = omega * x[1];
    out[1] = -omega * x[0];
  };
  apply_common(s, overrides);
  return s;
}

std::size_t substeps_per_sample(const SystemSpec& spec, double dt) {
  if (spec.kind == SystemKind::discrete_map) return 1;
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(ErrorKind::invalid_input, "integrate: dt must be > 0");
  const double ratio = spec.sampling_interval / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio)
    fail(ErrorKind::invalid_input,
         "integrate: sampling interval must be an integer multiple of dt");
  return static_cast<std::size_t>(n);
}

std::size_t sample_count(const SystemSpec& spec, double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    fail(ErrorKind::invalid_input, "integrate: duration must be >= 0");
  return static_cast<std::size_t>(std::llround(duration / spec.sampling_interval));
}

// Advances `state` by one recorded sample.
class Stepper {
 public:
  Stepper(const SystemSpec& spec, double p, double dt)
      : spec_(spec), p_(p), dt_(dt), sub_(substeps_per_sample(spec, dt)),
        scratch_(5 * spec.dimension), next_(spec.dimension) {}

  void advance(std::span<double> state, double t_start) {
    for (std::size_t k = 0; k < sub_; ++k) {
      if (spec_.kind == SystemKind::discrete_map) {
        spec_.evaluate(state, p_, next_);
        std::copy(next_.begin(), next_.end(), state.begin());
      } else {
        rk4_step(spec_.evaluate, state, p_, dt_, scratch_);
      }
      const double t = t_start + static_cast<double>(k + 1) *
                                     (spec_.kind == SystemKind::discrete_map
                                          ? spec_.sampling_interval
                                          : dt_);
      for (double& v : state) {
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << spec_.name << ": state diverged at t=" << t << " ("
              << spec_.parameter_name << "=" << p_ << ")";
          throw DivergenceError(msg.str(), t, p_);
        }
        if (spec_.non_negative && v < 0.0) {
          if (v >= -1e-12) {
            v = 0.0;
          } else {
            std::ostringstream msg;
            msg << spec_.name << ": negative density " << v << " at t=" << t
                << " (" << spec_.parameter_name << "=" << p_
                << "); reduce the integration step";
            throw DivergenceError(msg.str(), t, p_);
          }
        }
      }
    }
  }

 private:
  const SystemSpec& spec_;
  double p_;
  double dt_;
  std::size_t sub_;
  std::vector<double> scratch_;
  std::vector<double> next_;
};

void check_initial(const SystemSpec& spec, const Eigen::VectorXd& initial) {
  if (static_cast<std::size_t>(initial.size()) != spec.dimension)
    fail(ErrorKind::invalid_input, spec.name + ": initial state dimension");
  if (!initial.allFinite())
    fail(ErrorKind::invalid_state, spec.name + ": non-finite initial state");
}

}  // namespace

SystemSpec make_system(const std::string& name,
                       const std::map<std::string, double>& overrides) {
  if (name == "ikeda") return make_ikeda(overrides);
  if (name == "food_chain") return make_food_chain(overrides);
  if (name == "oscillator") return make_oscillator(overrides);
  fail(ErrorKind::config, "unknown system '" + name + "'");
}

std::vector<std::string> builtin_system_names() {
  return {"ikeda", "food_chain", "oscillator"};
}

void rk4_step(const Evaluator& f, std::span<double> state, double p, double dt,
              std::span<double> scratch) {
  const std::size_t m = state.size();
  auto k1 = scratch.subspan(0, m);
  auto k2 = scratch.subspan(m, m);
  auto k3 = scratch.subspan(2 * m, m);
  auto k4 = scratch.subspan(3 * m, m);
  auto tmp = scratch.subspan(4 * m, m);
  f(state, p, k1);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
  f(tmp, p, k2);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
  f(tmp, p, k3);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + dt * k3[i];
  f(tmp, p, k4);
  for (std::size_t i = 0; i < m; ++i)
    state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Trajectory integrate(const SystemSpec& spec, const Eigen::VectorXd& initial,
                     double p, double duration, double dt, double t0) {
  check_initial(spec, initial);
  const std::size_t n = sample_count(spec, duration);
  Stepper stepper(spec, p, dt);

  Trajectory traj;
  traj.param = p;
  traj.t0 = t0;
  traj.dt = spec.sampling_interval;
  traj.samples.resize(static_cast<Eigen::Index>(n + 1),
                      static_cast<Eigen::Index>(spec.dimension));
  std::vector<double> state(initial.data(), initial.data() + initial.size());
  traj.samples.row(0) = initial.transpose();
  for (std::size_t i = 1; i <= n; ++i) {
    stepper.advance(state, traj.time(i - 1));
    traj.samples.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(state.data(),
                                             static_cast<Eigen::Index>(state.size()));
  }
  return traj;
}

Eigen::VectorXd advance(const SystemSpec& spec, const Eigen::VectorXd& initial,
                        double p, double duration, double dt) {
  check_initial(spec, initial);
  const std::size_t n = sample_count(spec, duration);
  Stepper stepper(spec, p, dt);
  std::vector<double> state(initial.data(), initial.data() + initial.size());
  for (std::size_t i = 0; i < n; ++i)
    stepper.advance(state, spec.sampling_interval * static_cast<double>(i));
  return Eigen::Map<const Eigen::VectorXd>(state.data(),
                                           static_cast<Eigen::Index>(state.size()));
}

}  // namespace dtwin::dynsys
