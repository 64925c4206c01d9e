#pragma once

#include <string>
#include <vector>

#include "dtwin/dynsys/bifurcation.hpp"
#include "dtwin/dynsys/trajectory.hpp"
#include "dtwin/twin/detect.hpp"

namespace dtwin::io {

/// `%.17g` rendering; parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& s);

/// Header `t,x1,...,xM,p`, one row per sample, LF line endings.
std::string trajectory_to_csv(const dynsys::Trajectory& t);
dynsys::Trajectory trajectory_from_csv(const std::string& text);

/// One row per (p, variable):
/// `source,p,variable,min,max,mean,amplitude,collapsed,diverged,samples,extrema`
/// with the extrema joined by ';'.
std::string diagram_to_csv(const dynsys::BifurcationDiagram& d);
dynsys::BifurcationDiagram diagram_from_csv(const std::string& text);

/// Key = value report with a [transition] section.
std::string report_to_text(const twin::TransitionReport& r);
twin::TransitionReport report_from_text(const std::string& text);

enum class CsvKind { trajectory, diagram, unknown };
CsvKind sniff_csv(const std::string& text);

}  // namespace dtwin::io
