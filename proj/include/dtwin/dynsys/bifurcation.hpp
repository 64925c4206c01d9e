#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dtwin/dynsys/collapse.hpp"
#include "dtwin/dynsys/trajectory.hpp"

namespace dtwin::dynsys {

inline constexpr std::size_t kMaxExtrema = 200;

struct VariableSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  /// Sampled local maxima (at most kMaxExtrema). A window without a local
  /// maximum contributes its final value, so fixed points show as one point.
  std::vector<double> extrema;

  double amplitude() const { return max - min; }
};

struct AttractorSummary {
  std::vector<VariableSummary> variables;
  std::size_t samples = 0;
  bool collapsed = false;
  bool diverged = false;
};

/// Summary of a post-transient window. Non-finite rows mark the summary as
/// diverged and are excluded from the statistics.
AttractorSummary summarize(const Samples& window, const CollapseCriterion& c);

enum class DiagramSource { twin, oracle };

const char* to_string(DiagramSource s) noexcept;
DiagramSource diagram_source_from_string(const std::string& s);

struct DiagramEntry {
  double param = 0.0;
  AttractorSummary summary;
};

struct BifurcationDiagram {
  DiagramSource source = DiagramSource::oracle;
  std::string parameter_name;
  std::vector<std::string> variable_names;
  std::vector<DiagramEntry> entries;  // sorted by param
};

}  // namespace dtwin::dynsys
