#include "dtwin/dynsys/collapse.hpp"

#include <algorithm>
#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::dynsys {

void CollapseCriterion::validate(std::size_t dimension) const {
  if (mode == Mode::below_threshold && variable >= dimension)
    fail(ErrorKind::config, "collapse variable index out of range");
  if (!(threshold > 0.0))
    fail(ErrorKind::config, "collapse threshold must be positive");
  if (!(final_fraction > 0.0 && final_fraction <= 1.0))
    fail(ErrorKind::config, "collapse final fraction must lie in (0, 1]");
  if (!(blow_up_norm > 0.0))
    fail(ErrorKind::config, "blow-up norm must be positive");
}

const char* to_string(CollapseCriterion::Mode mode) noexcept {
  return mode == CollapseCriterion::Mode::below_threshold ? "below_threshold"
                                                          : "fixed_point";
}

CollapseCriterion::Mode collapse_mode_from_string(const std::string& s) {
  if (s == "below_threshold") return CollapseCriterion::Mode::below_threshold;
  if (s == "fixed_point") return CollapseCriterion::Mode::fixed_point;
  fail(ErrorKind::config, "unknown collapse mode '" + s + "'");
}

std::size_t tail_length(std::size_t rows, double final_fraction) {
  if (rows == 0) return 0;
  const auto n = static_cast<std::size_t>(
      std::ceil(final_fraction * static_cast<double>(rows)));
  return std::clamp<std::size_t>(n, 1, rows);
}

namespace {

// Fixed-point band: every later row lies within threshold/2 of the final row
// in each component, so the band width is at most `threshold`.
bool in_band(const Samples& w, Eigen::Index row, double half_width) {
  const auto last = w.rows() - 1;
  return ((w.row(row) - w.row(last)).cwiseAbs().array() <= half_width).all();
}

}  // namespace

bool is_collapsed(const Samples& window, const CollapseCriterion& c) {
  const auto rows = static_cast<std::size_t>(window.rows());
  if (rows == 0) return false;
  const auto tail = static_cast<Eigen::Index>(tail_length(rows, c.final_fraction));
  const auto first = window.rows() - tail;
  if (c.mode == CollapseCriterion::Mode::below_threshold) {
    const auto col = static_cast<Eigen::Index>(c.variable);
    if (c.absorbing) return (window.col(col).array() < c.threshold).any();
    for (Eigen::Index i = first; i < window.rows(); ++i)
      if (!(window(i, col) < c.threshold)) return false;
    return true;
  }
  const auto block = window.bottomRows(tail);
  if (!block.allFinite()) return false;
  const Eigen::RowVectorXd span =
      block.colwise().maxCoeff() - block.colwise().minCoeff();
  return (span.array() < c.threshold).all();
}

std::optional<std::size_t> collapse_onset(const Samples& window,
                                          const CollapseCriterion& c) {
  if (!is_collapsed(window, c)) return std::nullopt;
  Eigen::Index onset = window.rows();
  if (c.mode == CollapseCriterion::Mode::below_threshold) {
    const auto col = static_cast<Eigen::Index>(c.variable);
    if (c.absorbing) {
      Eigen::Index i = 0;
      while (!(window(i, col) < c.threshold)) ++i;
      return static_cast<std::size_t>(i);
    }
    while (onset > 0 && window(onset - 1, col) < c.threshold) --onset;
  } else {
    while (onset > 0 && in_band(window, onset - 1, 0.5 * c.threshold)) --onset;
  }
  return static_cast<std::size_t>(onset);
}

bool is_blown_up(const Samples& window, const CollapseCriterion& c) {
  for (Eigen::Index i = 0; i < window.rows(); ++i) {
    if (!window.row(i).allFinite()) return true;
    if (window.row(i).norm() > c.blow_up_norm) return true;
  }
  return false;
}

}  // namespace dtwin::dynsys
