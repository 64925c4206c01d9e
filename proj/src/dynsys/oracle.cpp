#include "dtwin/dynsys/oracle.hpp"

#include <cmath>
#include <sstream>

#include "dtwin/error.hpp"
#include "dtwin/parallel.hpp"

namespace dtwin::dynsys {

namespace {

double effective_dt(const SystemSpec& spec, double dt) {
  return dt > 0.0 ? dt : spec.step;
}

Eigen::VectorXd effective_initial(const SystemSpec& spec,
                                  const Eigen::VectorXd& initial) {
  return initial.size() > 0 ? initial : spec.initial_state;
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      fail(ErrorKind::invalid_input, "parameter grid must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      fail(ErrorKind::invalid_input, "parameter grid must be strictly increasing");
  }
}

}  // namespace

Trajectory settled_trajectory(const SystemSpec& spec, double p,
                              const ScanSettings& settings) {
  const double dt = effective_dt(spec, settings.dt);
  const Eigen::VectorXd start =
      advance(spec, effective_initial(spec, settings.initial), p,
              settings.transient, dt);
  return integrate(spec, start, p, settings.window, dt, settings.transient);
}

BifurcationDiagram oracle_bifurcation_scan(const SystemSpec& spec,
                                           const std::vector<double>& grid,
                                           const ScanSettings& settings) {
  if (grid.empty()) fail(ErrorKind::invalid_input, "oracle scan: empty grid");
  check_grid(grid);

  BifurcationDiagram d;
  d.source = DiagramSource::oracle;
  d.parameter_name = spec.parameter_name;
  d.variable_names = spec.variable_names;
  d.entries.resize(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const Trajectory t = settled_trajectory(spec, grid[i], settings);
        d.entries[i] = {grid[i], summarize(t.samples, spec.collapse)};
      },
      settings.threads);
  return d;
}

double largest_lyapunov_exponent(const SystemSpec& spec, double p,
                                 double transient, double duration,
                                 double renorm_interval, double separation,
                                 const Eigen::VectorXd& initial) {
  if (!(renorm_interval > 0.0) || !(duration > 0.0) || !(separation > 0.0))
    fail(ErrorKind::invalid_input, "lyapunov: bad settings");
  const double dt = spec.step;
  Eigen::VectorXd a = advance(spec, effective_initial(spec, initial), p,
                              transient, dt);
  Eigen::VectorXd b = a;
  b[0] += separation;
  const auto rounds = static_cast<std::size_t>(std::llround(duration / renorm_interval));
  double acc = 0.0;
  for (std::size_t k = 0; k < rounds; ++k) {
    a = advance(spec, a, p, renorm_interval, dt);
    b = advance(spec, b, p, renorm_interval, dt);
    const double d = (b - a).norm();
    if (!(d > 0.0) || !std::isfinite(d))
      fail(ErrorKind::numerical, "lyapunov: separation collapsed or diverged");
    acc += std::log(d / separation);
    b = a + (b - a) * (separation / d);
  }
  return acc / (static_cast<double>(rounds) * renorm_interval);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

std::optional<std::size_t> first_flip(const BifurcationDiagram& d) {
  for (std::size_t i = 1; i < d.entries.size(); ++i)
    if (d.entries[i].summary.collapsed != d.entries[i - 1].summary.collapsed)
      return i;
  return std::nullopt;
}

}  // namespace dtwin::dynsys
