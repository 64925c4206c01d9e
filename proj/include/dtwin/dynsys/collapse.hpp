#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include "dtwin/dynsys/trajectory.hpp"

namespace dtwin::dynsys {

/// Which observation of a run counts as "the system collapsed".
struct CollapseCriterion {
  enum class Mode {
    /// One designated variable stays below `threshold` (extinction).
    below_threshold,
    /// Every variable stays inside a band of width `threshold`
    /// (the oscillating attractor was replaced by a fixed point).
    fixed_point,
  };

  Mode mode = Mode::below_threshold;
  std::size_t variable = 0;
  double threshold = 1e-4;
  /// Trailing share of the observation window the predicate must hold on.
  double final_fraction = 0.25;
  /// below_threshold only: the first passage under the threshold is final
  /// (an extinct species cannot recover), whatever follows it.
  bool absorbing = false;
  /// Leaving the blow-up bound counts as collapse rather than divergence
  /// (the attractor disappeared and the orbit escaped).
  bool blow_up_collapses = false;
  /// States with a larger Euclidean norm count as blow-up.
  double blow_up_norm = std::numeric_limits<double>::infinity();

  void validate(std::size_t dimension) const;
};

const char* to_string(CollapseCriterion::Mode mode) noexcept;
CollapseCriterion::Mode collapse_mode_from_string(const std::string& s);

/// Number of trailing rows the predicate is evaluated on (at least one).
std::size_t tail_length(std::size_t rows, double final_fraction);

/// Evaluates the criterion on the trailing share of `window`, or on all of it
/// for an absorbing criterion. An empty window never counts as collapsed.
bool is_collapsed(const Samples& window, const CollapseCriterion& c);

/// First row from which the collapse predicate holds for the rest of the
/// window (the first passage, if absorbing), if the window is collapsed.
std::optional<std::size_t> collapse_onset(const Samples& window,
                                          const CollapseCriterion& c);

/// True when any row is non-finite or exceeds the blow-up norm.
bool is_blown_up(const Samples& window, const CollapseCriterion& c);

}  // namespace dtwin::dynsys
