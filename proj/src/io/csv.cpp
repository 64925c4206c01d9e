#include "dtwin/io/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "dtwin/error.hpp"

namespace dtwin::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) fail(ErrorKind::invalid_input, "empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    fail(ErrorKind::invalid_input, "not a number: '" + s + "'");
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  fail(ErrorKind::invalid_input, "not a boolean: '" + s + "'");
}

std::size_t parse_size(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::invalid_input, "not a count: '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

const char* kDiagramHeader =
    "source,p,variable,min,max,mean,amplitude,collapsed,diverged,samples,extrema";

}  // namespace

std::string trajectory_to_csv(const dynsys::Trajectory& t) {
  std::string out = "t";
  for (std::size_t j = 0; j < t.dimension(); ++j) out += ",x" + std::to_string(j + 1);
  out += ",p\n";
  const std::string p = format_double(t.param);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += format_double(t.time(i));
    for (std::size_t j = 0; j < t.dimension(); ++j) {
      out += ',';
      out += format_double(t.samples(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j)));
    }
    out += ',' + p + '\n';
  }
  return out;
}

dynsys::Trajectory trajectory_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) fail(ErrorKind::invalid_input, "trajectory CSV: empty");
  const auto header = split(lines[0], ',');
  if (header.size() < 3 || header.front() != "t" || header.back() != "p")
    fail(ErrorKind::invalid_input, "trajectory CSV: header must be t,x1,...,xM,p");
  const std::size_t m = header.size() - 2;
  const std::size_t n = lines.size() - 1;

  dynsys::Trajectory t;
  t.samples.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split(lines[i + 1], ',');
    if (f.size() != m + 2)
      fail(ErrorKind::invalid_input,
           "trajectory CSV: row " + std::to_string(i + 1) + " has wrong width");
    times[i] = parse_double(f[0]);
    for (std::size_t j = 0; j < m; ++j)
      t.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double(f[j + 1]);
    const double p = parse_double(f[m + 1]);
    if (i == 0) t.param = p;
    else if (p != t.param)
      fail(ErrorKind::invalid_input, "trajectory CSV: p column is not constant");
  }
  if (n == 0) return t;
  t.t0 = times[0];
  if (n == 1) return t;

  // Prefer a step that regenerates every time stamp exactly.
  const double candidates[] = {times[1] - times[0],
                               (times[n - 1] - times[0]) / static_cast<double>(n - 1)};
  double best = candidates[1];
  for (double dt : candidates) {
    bool exact = dt > 0;
    for (std::size_t i = 0; exact && i < n; ++i)
      exact = times[0] + dt * static_cast<double>(i) == times[i];
    if (exact) {
      best = dt;
      break;
    }
  }
  if (!(best > 0)) fail(ErrorKind::invalid_input, "trajectory CSV: time must increase");
  for (std::size_t i = 0; i < n; ++i) {
    const double expect = times[0] + best * static_cast<double>(i);
    if (std::abs(expect - times[i]) > 1e-9 * std::max(1.0, std::abs(times[i])))
      fail(ErrorKind::invalid_input, "trajectory CSV: time stamps are not uniform");
  }
  t.dt = best;
  return t;
}

std::string diagram_to_csv(const dynsys::BifurcationDiagram& d) {
  std::string out = std::string(kDiagramHeader) + '\n';
  const std::string source = dynsys::to_string(d.source);
  for (const auto& e : d.entries) {
    const auto& s = e.summary;
    for (std::size_t j = 0; j < s.variables.size(); ++j) {
      const auto& v = s.variables[j];
      const std::string name =
          j < d.variable_names.size() ? d.variable_names[j] : "x" + std::to_string(j + 1);
      out += source + ',' + format_double(e.param) + ',' + name + ',' +
             format_double(v.min) + ',' + format_double(v.max) + ',' +
             format_double(v.mean) + ',' + format_double(v.amplitude()) + ',' +
             (s.collapsed ? "1" : "0") + ',' + (s.diverged ? "1" : "0") + ',' +
             std::to_string(s.samples) + ',';
      for (std::size_t k = 0; k < v.extrema.size(); ++k) {
        if (k) out += ';';
        out += format_double(v.extrema[k]);
      }
      out += '\n';
    }
  }
  return out;
}

dynsys::BifurcationDiagram diagram_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kDiagramHeader)
    fail(ErrorKind::invalid_input, "diagram CSV: unexpected header");
  dynsys::BifurcationDiagram d;
  bool first = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 11)
      fail(ErrorKind::invalid_input,
           "diagram CSV: row " + std::to_string(i) + " has wrong width");
    const auto source = dynsys::diagram_source_from_string(f[0]);
    if (first) d.source = source;
    else if (source != d.source)
      fail(ErrorKind::invalid_input, "diagram CSV: mixed sources");
    const double p = parse_double(f[1]);
    const bool collapsed = parse_bool(f[7]);
    const bool diverged = parse_bool(f[8]);
    const std::size_t samples = parse_size(f[9]);

    if (first || p != d.entries.back().param) {
      if (!first && !(p > d.entries.back().param))
        fail(ErrorKind::invalid_input, "diagram CSV: p must increase");
      d.entries.push_back({p, {}});
      d.entries.back().summary.collapsed = collapsed;
      d.entries.back().summary.diverged = diverged;
      d.entries.back().summary.samples = samples;
    } else {
      const auto& s = d.entries.back().summary;
      if (s.collapsed != collapsed || s.diverged != diverged || s.samples != samples)
        fail(ErrorKind::invalid_input, "diagram CSV: inconsistent flags at one p");
    }
    auto& entry = d.entries.back();
    const std::size_t j = entry.summary.variables.size();
    if (d.entries.size() == 1) d.variable_names.push_back(f[2]);
    else if (j >= d.variable_names.size() || d.variable_names[j] != f[2])
      fail(ErrorKind::invalid_input, "diagram CSV: variables differ between rows");

    dynsys::VariableSummary v;
    v.min = parse_double(f[3]);
    v.max = parse_double(f[4]);
    v.mean = parse_double(f[5]);
    if (!f[10].empty())
      for (const auto& x : split(f[10], ';')) v.extrema.push_back(parse_double(x));
    entry.summary.variables.push_back(std::move(v));
    first = false;
  }
  for (const auto& e : d.entries)
    if (e.summary.variables.size() != d.variable_names.size())
      fail(ErrorKind::invalid_input, "diagram CSV: missing variable rows");
  return d;
}

std::string report_to_text(const twin::TransitionReport& r) {
  std::ostringstream out;
  out << "[transition]\n";
  out << "kind = " << twin::to_string(r.kind) << '\n';
  out << "parameter = " << r.parameter_name << '\n';
  if (r.bracket) {
    out << "bracket_lo = " << format_double(r.bracket->lo) << '\n';
    out << "bracket_hi = " << format_double(r.bracket->hi) << '\n';
    out << "lo_collapsed = " << (r.lo_collapsed ? "true" : "false") << '\n';
  }
  if (r.onset_index) out << "onset_index = " << *r.onset_index << '\n';
  if (r.onset_time) out << "onset_time = " << format_double(*r.onset_time) << '\n';
  for (const auto& e : r.evidence)
    out << "evidence = " << format_double(e.param) << ','
        << (e.summary.collapsed ? 1 : 0) << ',' << (e.summary.diverged ? 1 : 0)
        << '\n';
  for (const auto& n : r.notes) out << "note = " << n << '\n';
  return out.str();
}

twin::TransitionReport report_from_text(const std::string& text) {
  twin::TransitionReport r;
  bool in_section = false;
  std::optional<double> lo, hi;
  for (const auto& line : lines_of(text)) {
    if (line == "[transition]") {
      in_section = true;
      continue;
    }
    if (!in_section) fail(ErrorKind::invalid_input, "report: missing [transition]");
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) fail(ErrorKind::invalid_input, "report: bad line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "kind") r.kind = twin::transition_kind_from_string(value);
    else if (key == "parameter") r.parameter_name = value;
    else if (key == "bracket_lo") lo = parse_double(value);
    else if (key == "bracket_hi") hi = parse_double(value);
    else if (key == "lo_collapsed") r.lo_collapsed = parse_bool(value);
    else if (key == "onset_index") r.onset_index = parse_size(value);
    else if (key == "onset_time") r.onset_time = parse_double(value);
    else if (key == "evidence") {
      const auto f = split(value, ',');
      if (f.size() != 3) fail(ErrorKind::invalid_input, "report: bad evidence line");
      dynsys::DiagramEntry e;
      e.param = parse_double(f[0]);
      e.summary.collapsed = parse_bool(f[1]);
      e.summary.diverged = parse_bool(f[2]);
      r.evidence.push_back(std::move(e));
    }
    else if (key == "note") r.notes.push_back(value);
    else fail(ErrorKind::invalid_input, "report: unknown key '" + key + "'");
  }
  if (lo.has_value() != hi.has_value())
    fail(ErrorKind::invalid_input, "report: incomplete bracket");
  if (lo) r.bracket = twin::Bracket{*lo, *hi};
  return r;
}

CsvKind sniff_csv(const std::string& text) {
  const auto nl = text.find('\n');
  std::string header = text.substr(0, nl);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header == kDiagramHeader) return CsvKind::diagram;
  if (header.rfind("t,", 0) == 0 && header.size() > 2 &&
      header.compare(header.size() - 2, 2, ",p") == 0)
    return CsvKind::trajectory;
  return CsvKind::unknown;
}

}  // namespace dtwin::io
