// dtwin: command-line front end for simulation, training, prediction,
// bifurcation scans and transition detection.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dtwin/dynsys/oracle.hpp"
#include "dtwin/dynsys/system.hpp"
#include "dtwin/error.hpp"
#include "dtwin/io/config.hpp"
#include "dtwin/io/csv.hpp"
#include "dtwin/io/files.hpp"
#include "dtwin/io/model_file.hpp"
#include "dtwin/rng.hpp"
#include "dtwin/twin/detect.hpp"
#include "dtwin/twin/hyperopt.hpp"
#include "dtwin/twin/scan.hpp"
#include "dtwin/twin/twin.hpp"

namespace fs = std::filesystem;
using namespace dtwin;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Run configuration file");
  cmd->add_option("--seed", c.seed, "Master seed (u64)");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--set", c.sets, "Override, section.key=value (repeatable)");
}

io::RunConfig effective_config(const Common& c) {
  io::RunConfig cfg =
      c.config.empty() ? io::default_run_config() : io::load_run_config(c.config);
  for (const auto& s : c.sets) io::apply_override(cfg, s);
  if (c.seed) cfg.io.seed = *c.seed;
  if (!c.out.empty()) cfg.io.out = c.out;
  return cfg;
}

void write_output(const io::RunConfig& cfg, const std::string& name,
                  const std::string& bytes) {
  io::write_file_atomic(cfg.io.out / name, bytes);
  std::cout << "wrote " << (cfg.io.out / name).string() << '\n';
}

void echo_config(const io::RunConfig& cfg) {
  io::write_file_atomic(cfg.io.out / "effective.cfg", io::run_config_to_text(cfg));
}

int cmd_simulate(const Common& c, std::optional<double> param,
                 std::optional<double> duration) {
  io::RunConfig cfg = effective_config(c);
  if (param) cfg.system.param = *param;
  if (duration) cfg.system.duration = *duration;
  const auto spec = cfg.make_system();
  if (!(cfg.system.duration >= 0) || !(cfg.system.transient >= 0))
    fail(ErrorKind::config, "system.duration and system.transient must be >= 0");
  Eigen::VectorXd x0 = spec.initial_state;
  if (cfg.system.transient > 0)
    x0 = dynsys::advance(spec, x0, cfg.system.param, cfg.system.transient, spec.step);
  const auto traj = dynsys::integrate(spec, x0, cfg.system.param,
                                      cfg.system.duration, spec.step,
                                      cfg.system.transient);
  echo_config(cfg);
  write_output(cfg, "trajectory.csv", io::trajectory_to_csv(traj));
  return 0;
}

int cmd_train(const Common& c) {
  const io::RunConfig cfg = effective_config(c);
  const std::uint64_t seed = cfg.require_seed();
  const auto plan = cfg.make_plan();
  reservoir::ReservoirConfig rc = cfg.reservoir_for(plan.system);
  const auto data = twin::assemble_training_data(plan);

  std::ostringstream report;
  report << "[training]\n";
  report << "system = " << plan.system.name << '\n';
  report << "parameter = " << plan.system.parameter_name << '\n';
  report << "train_params = ";
  for (std::size_t i = 0; i < plan.train_params.size(); ++i)
    report << (i ? ", " : "") << io::format_double(plan.train_params[i]);
  report << '\n';
  report << "present_param = " << io::format_double(plan.present()) << '\n';
  report << "samples_per_param = " << plan.samples_per_param << '\n';

  std::string leaderboard;
  if (cfg.twin.search_budget > 0) {
    twin::SearchSettings ss;
    ss.budget = cfg.twin.search_budget;
    ss.horizon = cfg.twin.search_horizon;
    ss.seed = stage_seed(seed, "search");
    const auto result =
        twin::optimize_hyperparameters(data, rc, twin::SearchSpace{}, ss);
    rc = result.best;
    leaderboard =
        "candidate,score,spectral_radius,input_scaling,param_scaling,leak_rate,ridge\n";
    for (const auto& e : result.leaderboard)
      leaderboard += std::to_string(e.candidate) + ',' + io::format_double(e.score) +
                     ',' + io::format_double(e.config.spectral_radius) + ',' +
                     io::format_double(e.config.input_scaling) + ',' +
                     io::format_double(e.config.param_scaling) + ',' +
                     io::format_double(e.config.leak_rate) + ',' +
                     io::format_double(e.config.ridge) + '\n';
  }

  const auto twin = twin::train_twin(data, rc);
  report << "residual = " << io::format_double(twin.residual) << '\n';
  for (const auto& w : rc.warnings()) report << "warning = " << w << '\n';

  echo_config(cfg);
  write_output(cfg, "model.bin", io::encode_model(twin));
  write_output(cfg, "train_report.txt", report.str());
  if (!leaderboard.empty()) write_output(cfg, "leaderboard.csv", leaderboard);
  return 0;
}

int cmd_predict(const Common& c, const std::string& model, double dp,
                std::optional<std::size_t> horizon) {
  const io::RunConfig cfg = effective_config(c);
  cfg.require_seed();
  const auto twin = io::load_model(model);
  const double p = twin.present_param + dp;
  const auto f = twin::predict_at_parameter(twin, p, twin.warm,
                                            horizon.value_or(cfg.twin.horizon));
  echo_config(cfg);
  write_output(cfg, "forecast.csv", io::trajectory_to_csv(f.trajectory));
  std::cout << "status=" << twin::to_string(f.status) << " p=" << io::format_double(p)
            << " steps=" << f.trajectory.size();
  if (!f.note.empty()) std::cout << " note=\"" << f.note << '"';
  std::cout << '\n';
  return f.status == twin::PredictionStatus::diverged ? 3 : 0;
}

int cmd_scan(const Common& c, const std::string& model, const std::string& grid,
             bool oracle) {
  const io::RunConfig cfg = effective_config(c);
  cfg.require_seed();
  const io::GridSpec g = grid.empty() ? cfg.twin.grid : io::parse_grid(grid);
  dynsys::BifurcationDiagram d;
  if (oracle) {
    const auto spec = cfg.make_system();
    d = dynsys::oracle_bifurcation_scan(spec, g.values(), cfg.oracle_settings());
  } else {
    if (model.empty()) fail(ErrorKind::usage, "scan needs --model or --oracle");
    const auto twin = io::load_model(model);
    d = twin::scan_bifurcation(twin, g.values(), cfg.rollout_settings());
    d.parameter_name = dynsys::make_system(twin.system_name, twin.system_params).parameter_name;
  }
  echo_config(cfg);
  write_output(cfg, oracle ? "oracle_diagram.csv" : "diagram.csv",
               io::diagram_to_csv(d));
  return 0;
}

int cmd_detect(const Common& c, const std::string& input, const std::string& model) {
  const io::RunConfig cfg = effective_config(c);
  const std::string text = io::read_file(input);
  twin::TransitionReport r;
  switch (io::sniff_csv(text)) {
    case io::CsvKind::diagram: {
      r = twin::detect_transition(io::diagram_from_csv(text));
      if (!model.empty() && cfg.twin.refine_iterations > 0)
        r = twin::refine_transition(io::load_model(model), r, cfg.rollout_settings(),
                                    cfg.twin.refine_iterations);
      break;
    }
    case io::CsvKind::trajectory: {
      dynsys::CollapseCriterion crit;
      if (!model.empty()) crit = io::load_model(model).collapse;
      else crit = cfg.make_system().collapse;
      r = twin::detect_transition(io::trajectory_from_csv(text), crit);
      break;
    }
    case io::CsvKind::unknown:
      fail(ErrorKind::invalid_input, input + ": neither a trajectory nor a diagram CSV");
  }
  // CSV files do not carry the parameter name; take it from the model or system.
  if (r.parameter_name.empty()) {
    if (!model.empty()) {
      const auto t = io::load_model(model);
      r.parameter_name = dynsys::make_system(t.system_name, t.system_params).parameter_name;
    } else if (cfg.system.name) {
      r.parameter_name = cfg.make_system().parameter_name;
    }
  }
  echo_config(cfg);
  write_output(cfg, "report.txt", io::report_to_text(r));
  std::cout << "transition=" << twin::to_string(r.kind);
  if (r.bracket)
    std::cout << " bracket=[" << io::format_double(r.bracket->lo) << ", "
              << io::format_double(r.bracket->hi) << "]";
  if (r.onset_time) std::cout << " onset_time=" << io::format_double(*r.onset_time);
  std::cout << '\n';
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::divergence:
    case ErrorKind::numerical:
    case ErrorKind::degenerate_reservoir:
    case ErrorKind::rank_deficiency:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-aware reservoir digital twin"};
  app.require_subcommand(1);

  Common common;
  std::optional<double> param, duration;
  auto* sim = app.add_subcommand("simulate", "Integrate the configured system");
  add_common(sim, common);
  sim->add_option("--param", param, "Bifurcation parameter value");
  sim->add_option("--duration", duration, "Recorded time span");

  auto* train = app.add_subcommand("train", "Train a twin from simulated data");
  add_common(train, common);

  std::string model;
  double dp = 0.0;
  std::optional<std::size_t> horizon;
  auto* predict = app.add_subcommand("predict", "Forecast at present parameter + dp");
  add_common(predict, common);
  predict->add_option("--model", model, "Model file")->required();
  predict->add_option("--dp", dp, "Parameter change from the present value");
  predict->add_option("--horizon", horizon, "Closed-loop steps");

  std::string grid;
  bool oracle = false;
  auto* scan = app.add_subcommand("scan", "Bifurcation diagram of twin or system");
  add_common(scan, common);
  scan->add_option("--model", model, "Model file (twin diagram)");
  scan->add_option("--grid", grid, "Parameter grid lo:hi:n");
  scan->add_flag("--oracle", oracle, "Scan the configured system directly");

  std::string input;
  auto* detect = app.add_subcommand("detect", "Transition report from a CSV");
  add_common(detect, common);
  detect->add_option("--input", input, "Trajectory or diagram CSV")->required();
  detect->add_option("--model", model, "Model for bisection refinement or criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(common, param, duration);
    if (*train) return cmd_train(common);
    if (*predict) return cmd_predict(common, model, dp, horizon);
    if (*scan) return cmd_scan(common, model, grid, oracle);
    if (*detect) return cmd_detect(common, input, model);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
