#pragma once

#include <string>

#include "plcalib/report.hpp"

namespace plcalib {

// Which rows of a report to draw and how.
//   kSkipScatter  pp rows as a scatter, one color per skip length n
//   kSweepCurves  deflection offset vs. translation, one polyline per
//                 (direction, alpha) series
//   kPairsScatter pp rows of the pair evaluation; the all-pairs estimate is
//                 drawn apart from the 2-pair combinations
enum class PlotKind { kSkipScatter, kSweepCurves, kPairsScatter };

// Renders a standalone SVG document. The drawing window is auto-scaled to the
// plotted data (5% padding) and recorded in the <desc> element. Bytes are a
// pure function of the report, so identical reports give identical files.
// Throws EmptySelection when the report has no usable rows for the kind.
std::string render_svg(const ExperimentReport& report, PlotKind kind);

// render_svg to a file; IoError on failure.
void write_svg(const ExperimentReport& report, PlotKind kind, const std::string& path);

}  // namespace plcalib
