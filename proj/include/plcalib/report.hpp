#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plcalib {

// One CSV row. Numeric fields that do not apply to a row's kind stay empty.
// kind values and how they nest:
//   deflection          sweep detail (angle/offset vs the reference line)
//   pp                  one principal-point estimate
//   centroid            mean of the pp rows sharing (method, seed, n)
//   summary             mean/std over a seed's centroid rows (or pp rows when
//                       the experiment has no centroid level)
//   aggregate           mean over the per-seed summary rows of one method
//   ratio               std ratio between two methods' summary/aggregate rows
struct ReportRow {
  std::string experiment;
  std::string kind;
  std::string method;              // pl | zhang | zhang/pl | empty
  std::string seed;                // "7", "1+2+3" for cross-seed rows, or empty
  std::optional<int> n;            // skip length
  std::optional<int> skip_start;   // first skipped ring index
  std::optional<double> tx;
  std::optional<double> ty;
  std::optional<double> alpha_deg;
  std::string pose_id;             // pose / combination label
  std::optional<double> u;
  std::optional<double> v;
  std::optional<double> rms_px;
  std::optional<double> angle_deg;
  std::optional<double> offset_px;
  std::optional<double> std_u;
  std::optional<double> std_v;
  std::string status = "ok";       // ok, or the error tag for a failed cell
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config_entries;  // provenance
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;
};

// Renders the full CSV: `# key = value` provenance comments (sorted), `# note:`
// lines, the fixed header, then the rows with 9-significant-digit numbers.
// Runs verify_report_consistency first, so an internally inconsistent report
// can never be written out.
std::string render_report_csv(const ExperimentReport& report);

// render_report_csv to a file; IoError on failure.
void write_report_csv(const ExperimentReport& report, const std::string& path);

// Recomputes every centroid, summary, aggregate, and ratio row from the rows
// beneath it and throws Error when any value is off by more than 1e-9.
void verify_report_consistency(const ExperimentReport& report);

// Mean and population standard deviation of a 2-D sample. Both the experiment
// runners (building summary rows) and the consistency checker go through this
// one function so they cannot drift apart.
struct PointStats {
  double mean_u = 0.0;
  double mean_v = 0.0;
  double std_u = 0.0;
  double std_v = 0.0;
  std::size_t count = 0;
};
PointStats point_stats(const std::vector<std::pair<double, double>>& points);

// %.9g with -0 folded to 0; shared by the CSV and SVG emitters.
std::string format_number(double x);

}  // namespace plcalib
