#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/trajectory.hpp"
#include "dtwin/twin/scan.hpp"

namespace dtwin::twin {

enum class TransitionKind { collapse, none, diverged };

const char* to_string(TransitionKind k) noexcept;
TransitionKind transition_kind_from_string(const std::string& s);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool overlaps(const Bracket& other) const {
    return lo <= other.hi && other.lo <= hi;
  }
};

struct TransitionReport {
  TransitionKind kind = TransitionKind::none;
  std::string parameter_name;
  /// Critical-parameter interval (diagram mode).
  std::optional<Bracket> bracket;
  /// Collapsed flag at bracket.lo, used to orient bisection.
  bool lo_collapsed = false;
  /// First sample of the final collapsed stretch (trajectory mode).
  std::optional<std::size_t> onset_index;
  std::optional<double> onset_time;
  std::vector<dynsys::DiagramEntry> evidence;
  std::vector<std::string> notes;
};

/// Trajectory mode: collapse iff the criterion holds on the trailing share of
/// the run.
TransitionReport detect_transition(const dynsys::Trajectory& traj,
                                   const dynsys::CollapseCriterion& c);

/// Diagram mode: collapse iff the collapsed flag flips along the grid; the
/// first flip between non-diverged neighbours gives the bracket.
TransitionReport detect_transition(const dynsys::BifurcationDiagram& d);

/// Bisection on a bracket whose ends disagree. `collapsed_at` classifies a
/// parameter value. Every iteration halves the interval and keeps it inside
/// the previous one.
Bracket bisect_bracket(Bracket b, bool lo_collapsed,
                       const std::function<bool(double)>& collapsed_at,
                       std::size_t iterations);

/// Refines a diagram-mode report with twin rollouts at bisection midpoints.
TransitionReport refine_transition(const TrainedTwin& twin,
                                   TransitionReport report,
                                   const RolloutSettings& settings,
                                   std::size_t iterations);

}  // namespace dtwin::twin
