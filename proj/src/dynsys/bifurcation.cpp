#include "dtwin/dynsys/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "dtwin/error.hpp"

namespace dtwin::dynsys {

const char* to_string(DiagramSource s) noexcept {
  return s == DiagramSource::twin ? "twin" : "oracle";
}

DiagramSource diagram_source_from_string(const std::string& s) {
  if (s == "twin") return DiagramSource::twin;
  if (s == "oracle") return DiagramSource::oracle;
  fail(ErrorKind::invalid_input, "unknown diagram source '" + s + "'");
}

namespace {

std::vector<double> sampled_maxima(const Eigen::VectorXd& x) {
  std::vector<double> peaks;
  for (Eigen::Index i = 1; i + 1 < x.size(); ++i)
    if (x[i] > x[i - 1] && x[i] >= x[i + 1]) peaks.push_back(x[i]);
  if (peaks.empty()) {
    if (x.size() > 0) peaks.push_back(x[x.size() - 1]);
    return peaks;
  }
  if (peaks.size() <= kMaxExtrema) return peaks;
  std::vector<double> out(kMaxExtrema);
  for (std::size_t k = 0; k < kMaxExtrema; ++k)
    out[k] = peaks[k * peaks.size() / kMaxExtrema];
  return out;
}

}  // namespace

AttractorSummary summarize(const Samples& window, const CollapseCriterion& c) {
  AttractorSummary s;
  const auto cols = window.cols();
  s.variables.resize(static_cast<std::size_t>(cols));

  // Keep the finite prefix; a non-finite row ends the usable data.
  Eigen::Index rows = 0;
  while (rows < window.rows() && window.row(rows).allFinite()) ++rows;
  s.diverged = rows < window.rows() || is_blown_up(window.topRows(rows), c);
  s.samples = static_cast<std::size_t>(rows);
  if (rows == 0) {
    s.collapsed = s.diverged && c.blow_up_collapses;
    s.diverged = s.diverged && !c.blow_up_collapses;
    return s;
  }

  const auto usable = window.topRows(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Eigen::VectorXd col = usable.col(j);
    auto& v = s.variables[static_cast<std::size_t>(j)];
    v.min = col.minCoeff();
    v.max = col.maxCoeff();
    v.mean = col.mean();
    v.extrema = sampled_maxima(col);
  }
  if (s.diverged && c.blow_up_collapses) {
    s.diverged = false;
    s.collapsed = true;
    return s;
  }
  s.collapsed = !s.diverged && is_collapsed(Samples(usable), c);
  return s;
}

}  // namespace dtwin::dynsys
