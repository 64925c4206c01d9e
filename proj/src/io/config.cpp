#include "dtwin/io/config.hpp"

#include <cstdlib>
#include <sstream>

#include "dtwin/error.hpp"
#include "dtwin/io/csv.hpp"
#include "dtwin/io/files.hpp"
#include "dtwin/rng.hpp"

namespace dtwin::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    fail(ErrorKind::config, key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::config, key + ": expected a non-negative integer, got '" + v + "'");
  errno = 0;
  const auto x = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) fail(ErrorKind::config, key + ": integer out of range");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorKind::config, key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

void set_system(SystemSection& s, const std::string& key, const std::string& v) {
  const std::string k = "system." + key;
  if (key == "name") s.name = v;
  else if (key == "param") s.param = to_double(k, v);
  else if (key == "duration") s.duration = to_double(k, v);
  else if (key == "transient") s.transient = to_double(k, v);
  else if (key == "initial") {
    const auto x = to_list(k, v);
    s.initial = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  } else if (key == "collapse_mode") s.collapse_mode = v;
  else if (key == "collapse_variable") s.collapse_variable = to_u64(k, v);
  else if (key == "collapse_threshold") s.collapse_threshold = to_double(k, v);
  else if (key == "collapse_fraction") s.collapse_fraction = to_double(k, v);
  else if (key == "collapse_absorbing") s.collapse_absorbing = to_bool(k, v);
  else if (key == "blow_up_collapses") s.blow_up_collapses = to_bool(k, v);
  else if (key == "blow_up_norm") s.blow_up_norm = to_double(k, v);
  else s.params[key] = to_double(k, v);  // checked against the named system
}

void set_reservoir(reservoir::ReservoirConfig& r, const std::string& key,
                   const std::string& v) {
  const std::string k = "reservoir." + key;
  if (key == "size") r.size = to_u64(k, v);
  else if (key == "spectral_radius") r.spectral_radius = to_double(k, v);
  else if (key == "density") r.density = to_double(k, v);
  else if (key == "input_scaling") r.input_scaling = to_double(k, v);
  else if (key == "param_scaling") r.param_scaling = to_double(k, v);
  else if (key == "bias_scaling") r.bias_scaling = to_double(k, v);
  else if (key == "leak_rate") r.leak_rate = to_double(k, v);
  else if (key == "ridge") r.ridge = to_double(k, v);
  else if (key == "input_noise") r.input_noise = to_double(k, v);
  else if (key == "warmup") r.warmup = to_u64(k, v);
  else fail(ErrorKind::config, "unknown key '" + k + "'");
}

void set_twin(TwinSection& t, const std::string& key, const std::string& v) {
  const std::string k = "twin." + key;
  if (key == "train_params") t.train_params = to_list(k, v);
  else if (key == "present_param") t.present_param = to_double(k, v);
  else if (key == "declared_critical") t.declared_critical = to_double(k, v);
  else if (key == "samples_per_param") t.samples_per_param = to_u64(k, v);
  else if (key == "transient") t.transient = to_double(k, v);
  else if (key == "grid") {
    try {
      t.grid = parse_grid(v);
    } catch (const Error& e) {
      fail(ErrorKind::config, k + ": " + e.what());
    }
  } else if (key == "scan_transient") t.scan_transient = to_u64(k, v);
  else if (key == "scan_window") t.scan_window = to_u64(k, v);
  else if (key == "oracle_transient") t.oracle_transient = to_double(k, v);
  else if (key == "oracle_window") t.oracle_window = to_double(k, v);
  else if (key == "refine_iterations") t.refine_iterations = to_u64(k, v);
  else if (key == "horizon") t.horizon = to_u64(k, v);
  else if (key == "search_budget") t.search_budget = to_u64(k, v);
  else if (key == "search_horizon") t.search_horizon = to_u64(k, v);
  else fail(ErrorKind::config, "unknown key '" + k + "'");
}

void set_io(IoSection& io, const std::string& key, const std::string& v) {
  const std::string k = "io." + key;
  if (key == "seed") io.seed = to_u64(k, v);
  else if (key == "out") io.out = v;
  else if (key == "threads") io.threads = static_cast<unsigned>(to_u64(k, v));
  else fail(ErrorKind::config, "unknown key '" + k + "'");
}

void set(RunConfig& cfg, const std::string& section, const std::string& key,
         const std::string& value) {
  if (section == "system") set_system(cfg.system, key, value);
  else if (section == "reservoir") set_reservoir(cfg.reservoir, key, value);
  else if (section == "twin") set_twin(cfg.twin, key, value);
  else if (section == "io") set_io(cfg.io, key, value);
  else fail(ErrorKind::config, "unknown section '" + section + "'");
}

// Fixed parameters can only be checked once the system is known.
void check_system_keys(const RunConfig& cfg) {
  if (cfg.system.name) {
    (void)cfg.make_system();
  } else if (!cfg.system.params.empty()) {
    fail(ErrorKind::config, "unknown key 'system." + cfg.system.params.begin()->first +
                                "' (no system name given)");
  }
}

}  // namespace

ConfigText parse_config_text(const std::string& text) {
  ConfigText out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::config, where + "unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(ErrorKind::config, where + "empty section name");
      out.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, where + "expected key = value");
    if (section.empty()) fail(ErrorKind::config, where + "entry outside a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(ErrorKind::config, where + "empty key");
    auto& entries = out.sections[section];
    if (entries.count(key))
      fail(ErrorKind::config, where + "duplicate key '" + section + "." + key + "'");
    entries[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> GridSpec::values() const {
  return dynsys::linear_grid(lo, hi, n);
}

GridSpec parse_grid(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (b == std::string::npos || s.find(':', b + 1) != std::string::npos)
    fail(ErrorKind::usage, "grid must look like lo:hi:n, got '" + s + "'");
  GridSpec g;
  try {
    g.lo = parse_double(trim(s.substr(0, a)));
    g.hi = parse_double(trim(s.substr(a + 1, b - a - 1)));
  } catch (const Error&) {
    fail(ErrorKind::usage, "grid bounds must be numbers, got '" + s + "'");
  }
  const std::string n = trim(s.substr(b + 1));
  if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::usage, "grid count must be a positive integer, got '" + s + "'");
  g.n = std::stoul(n);
  if (g.n == 0 || !std::isfinite(g.lo) || !std::isfinite(g.hi) || g.lo > g.hi ||
      (g.n > 1 && !(g.lo < g.hi)))
    fail(ErrorKind::usage, "grid needs n >= 1 and lo < hi, got '" + s + "'");
  return g;
}

std::string format_grid(const GridSpec& g) {
  return format_double(g.lo) + ':' + format_double(g.hi) + ':' + std::to_string(g.n);
}

dynsys::SystemSpec RunConfig::make_system() const {
  if (!system.name) fail(ErrorKind::usage, "no system name given ([system] name)");
  dynsys::SystemSpec s = dynsys::make_system(*system.name, system.params);
  if (system.initial) s.initial_state = *system.initial;
  if (system.collapse_mode)
    s.collapse.mode = dynsys::collapse_mode_from_string(*system.collapse_mode);
  if (system.collapse_variable) s.collapse.variable = *system.collapse_variable;
  if (system.collapse_threshold) s.collapse.threshold = *system.collapse_threshold;
  if (system.collapse_fraction) s.collapse.final_fraction = *system.collapse_fraction;
  if (system.collapse_absorbing) s.collapse.absorbing = *system.collapse_absorbing;
  if (system.blow_up_collapses) s.collapse.blow_up_collapses = *system.blow_up_collapses;
  if (system.blow_up_norm) s.collapse.blow_up_norm = *system.blow_up_norm;
  s.validate();
  s.collapse.validate(s.dimension);
  return s;
}

twin::TrainingPlan RunConfig::make_plan() const {
  twin::TrainingPlan plan;
  plan.system = make_system();
  plan.train_params = twin.train_params;
  plan.samples_per_param = twin.samples_per_param;
  plan.transient = twin.transient;
  plan.present_param = twin.present_param;
  plan.declared_critical = twin.declared_critical;
  plan.threads = io.threads;
  plan.validate();
  return plan;
}

reservoir::ReservoirConfig RunConfig::reservoir_for(const dynsys::SystemSpec& s) const {
  reservoir::ReservoirConfig r = reservoir;
  r.input_dim = s.dimension;
  r.output_dim = s.dimension;
  r.seed = stage_seed(require_seed(), "reservoir");
  r.validate();
  return r;
}

dynsys::ScanSettings RunConfig::oracle_settings() const {
  dynsys::ScanSettings st;
  st.transient = twin.oracle_transient;
  st.window = twin.oracle_window;
  if (system.initial) st.initial = *system.initial;
  st.threads = io.threads;
  return st;
}

twin::RolloutSettings RunConfig::rollout_settings() const {
  twin::RolloutSettings st;
  st.transient = twin.scan_transient;
  st.window = twin.scan_window;
  st.threads = io.threads;
  return st;
}

std::uint64_t RunConfig::require_seed() const {
  if (!io.seed) fail(ErrorKind::usage, "a seed is required (--seed or [io] seed)");
  return *io.seed;
}

RunConfig default_run_config() {
  RunConfig cfg;
  if (const char* env = std::getenv("DTWIN_OUT"); env && *env) cfg.io.out = env;
  return cfg;
}

RunConfig parse_run_config(const std::string& text, RunConfig base) {
  const ConfigText parsed = parse_config_text(text);
  for (const auto& [section, entries] : parsed.sections)
    for (const auto& [key, value] : entries) set(base, section, key, value);
  check_system_keys(base);
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
  return parse_run_config(text, default_run_config());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    fail(ErrorKind::usage, "override must look like section.key=value, got '" +
                               assignment + "'");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));
  // Overrides replace file values, so a duplicate is fine here.
  if (section == "system" && cfg.system.params.count(key)) cfg.system.params.erase(key);
  set(cfg, section, key, value);
  check_system_keys(cfg);
}

std::string run_config_to_text(const RunConfig& cfg) {
  std::ostringstream o;
  const auto& s = cfg.system;
  o << "[system]\n";
  if (s.name) o << "name = " << *s.name << '\n';
  for (const auto& [k, v] : s.params) o << k << " = " << format_double(v) << '\n';
  if (s.initial) {
    o << "initial = "
      << join(std::vector<double>(s.initial->data(), s.initial->data() + s.initial->size()))
      << '\n';
  }
  if (s.collapse_mode) o << "collapse_mode = " << *s.collapse_mode << '\n';
  if (s.collapse_variable) o << "collapse_variable = " << *s.collapse_variable << '\n';
  if (s.collapse_threshold)
    o << "collapse_threshold = " << format_double(*s.collapse_threshold) << '\n';
  if (s.collapse_fraction)
    o << "collapse_fraction = " << format_double(*s.collapse_fraction) << '\n';
  if (s.collapse_absorbing)
    o << "collapse_absorbing = " << (*s.collapse_absorbing ? "true" : "false") << '\n';
  if (s.blow_up_collapses)
    o << "blow_up_collapses = " << (*s.blow_up_collapses ? "true" : "false") << '\n';
  if (s.blow_up_norm) o << "blow_up_norm = " << format_double(*s.blow_up_norm) << '\n';
  o << "param = " << format_double(s.param) << '\n';
  o << "duration = " << format_double(s.duration) << '\n';
  o << "transient = " << format_double(s.transient) << '\n';

  const auto& r = cfg.reservoir;
  o << "\n[reservoir]\n";
  o << "size = " << r.size << '\n';
  o << "spectral_radius = " << format_double(r.spectral_radius) << '\n';
  o << "density = " << format_double(r.density) << '\n';
  o << "input_scaling = " << format_double(r.input_scaling) << '\n';
  o << "param_scaling = " << format_double(r.param_scaling) << '\n';
  o << "bias_scaling = " << format_double(r.bias_scaling) << '\n';
  o << "leak_rate = " << format_double(r.leak_rate) << '\n';
  o << "ridge = " << format_double(r.ridge) << '\n';
  o << "input_noise = " << format_double(r.input_noise) << '\n';
  o << "warmup = " << r.warmup << '\n';

  const auto& t = cfg.twin;
  o << "\n[twin]\n";
  o << "train_params = " << join(t.train_params) << '\n';
  if (t.present_param) o << "present_param = " << format_double(*t.present_param) << '\n';
  if (t.declared_critical)
    o << "declared_critical = " << format_double(*t.declared_critical) << '\n';
  o << "samples_per_param = " << t.samples_per_param << '\n';
  o << "transient = " << format_double(t.transient) << '\n';
  o << "grid = " << format_grid(t.grid) << '\n';
  o << "scan_transient = " << t.scan_transient << '\n';
  o << "scan_window = " << t.scan_window << '\n';
  o << "oracle_transient = " << format_double(t.oracle_transient) << '\n';
  o << "oracle_window = " << format_double(t.oracle_window) << '\n';
  o << "refine_iterations = " << t.refine_iterations << '\n';
  o << "horizon = " << t.horizon << '\n';
  o << "search_budget = " << t.search_budget << '\n';
  o << "search_horizon = " << t.search_horizon << '\n';

  o << "\n[io]\n";
  if (cfg.io.seed) o << "seed = " << *cfg.io.seed << '\n';
  o << "out = " << cfg.io.out.string() << '\n';
  o << "threads = " << cfg.io.threads << '\n';
  return o.str();
}

}  // namespace dtwin::io
