#include "dtwin/twin/detect.hpp"

#include <sstream>

#include "dtwin/error.hpp"

namespace dtwin::twin {

const char* to_string(TransitionKind k) noexcept {
  switch (k) {
    case TransitionKind::collapse: return "collapse";
    case TransitionKind::none: return "none";
    case TransitionKind::diverged: return "diverged";
  }
  return "unknown";
}

TransitionKind transition_kind_from_string(const std::string& s) {
  if (s == "collapse") return TransitionKind::collapse;
  if (s == "none") return TransitionKind::none;
  if (s == "diverged") return TransitionKind::diverged;
  fail(ErrorKind::invalid_input, "unknown transition kind '" + s + "'");
}

TransitionReport detect_transition(const dynsys::Trajectory& traj,
                                   const dynsys::CollapseCriterion& c) {
  TransitionReport rep;
  rep.notes.push_back("mode: trajectory");
  if (traj.size() == 0) {
    rep.kind = TransitionKind::none;
    rep.notes.push_back("insufficient data: empty trajectory");
    return rep;
  }
  if (dynsys::is_blown_up(traj.samples, c)) {
    rep.kind = TransitionKind::diverged;
    rep.notes.push_back("trajectory is non-finite or exceeds the blow-up bound");
    return rep;
  }
  if (const auto onset = dynsys::collapse_onset(traj.samples, c)) {
    rep.kind = TransitionKind::collapse;
    rep.onset_index = *onset;
    rep.onset_time = traj.time(*onset);
  } else {
    rep.kind = TransitionKind::none;
  }
  return rep;
}

TransitionReport detect_transition(const dynsys::BifurcationDiagram& d) {
  TransitionReport rep;
  rep.parameter_name = d.parameter_name;
  rep.evidence = d.entries;
  rep.notes.push_back(std::string("mode: diagram (") + dynsys::to_string(d.source) +
                      ")");
  if (d.entries.empty()) {
    rep.kind = TransitionKind::none;
    rep.notes.push_back("insufficient data: empty diagram");
    return rep;
  }

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < d.entries.size(); ++i)
    if (!d.entries[i].summary.diverged) usable.push_back(i);
  if (usable.empty()) {
    rep.kind = TransitionKind::diverged;
    rep.notes.push_back("every grid point diverged");
    return rep;
  }
  if (usable.size() < d.entries.size()) {
    std::ostringstream msg;
    msg << d.entries.size() - usable.size()
        << " diverged grid point(s) ignored for flip detection";
    rep.notes.push_back(msg.str());
  }

  std::vector<std::size_t> flips;  // position in `usable` after the flip
  for (std::size_t k = 1; k < usable.size(); ++k)
    if (d.entries[usable[k]].summary.collapsed !=
        d.entries[usable[k - 1]].summary.collapsed)
      flips.push_back(k);

  if (flips.empty()) {
    if (d.entries[usable.front()].summary.collapsed) {
      rep.kind = TransitionKind::collapse;
      rep.notes.push_back("collapsed at every grid point; transition lies "
                          "outside the grid");
    } else {
      rep.kind = TransitionKind::none;
    }
    return rep;
  }

  const auto& lo = d.entries[usable[flips.front() - 1]];
  const auto& hi = d.entries[usable[flips.front()]];
  rep.kind = TransitionKind::collapse;
  rep.bracket = Bracket{lo.param, hi.param};
  rep.lo_collapsed = lo.summary.collapsed;
  if (rep.lo_collapsed)
    rep.notes.push_back("collapsed below the bracket, sustained above it");
  if (flips.size() > 1) {
    std::ostringstream msg;
    msg << "warning: collapsed flag flips " << flips.size()
        << " times; reporting the first flip";
    rep.notes.push_back(msg.str());
  }
  return rep;
}

Bracket bisect_bracket(Bracket b, bool lo_collapsed,
                       const std::function<bool(double)>& collapsed_at,
                       std::size_t iterations) {
  if (!(b.lo < b.hi)) fail(ErrorKind::invalid_input, "bisection: empty bracket");
  for (std::size_t i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (!(mid > b.lo && mid < b.hi)) break;  // interval at machine resolution
    if (collapsed_at(mid) == lo_collapsed)
      b.lo = mid;
    else
      b.hi = mid;
  }
  return b;
}

TransitionReport refine_transition(const TrainedTwin& twin,
                                   TransitionReport report,
                                   const RolloutSettings& settings,
                                   std::size_t iterations) {
  if (!report.bracket || iterations == 0) return report;
  RolloutSettings serial = settings;
  serial.threads = 1;
  std::size_t diverged = 0;
  auto classify = [&](double p) {
    const auto s = twin_summary(twin, p, serial);
    if (s.diverged) ++diverged;
    // A diverged midpoint is not a collapse; it sides with the sustained end.
    return s.collapsed;
  };
  report.bracket =
      bisect_bracket(*report.bracket, report.lo_collapsed, classify, iterations);
  std::ostringstream msg;
  msg << "refined by " << iterations << " bisection step(s)";
  if (diverged > 0) msg << " (" << diverged << " diverged midpoint(s))";
  report.notes.push_back(msg.str());
  return report;
}

}  // namespace dtwin::twin
