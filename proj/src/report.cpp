#include "plcalib/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {

constexpr double kConsistencyTol = 1e-9;

const char kHeader[] =
    "experiment,kind,method,seed,n,skip_start,tx,ty,alpha_deg,pose_id,"
    "u,v,rms_px,angle_deg,offset_px,std_u,std_v,status";

void append_cell(std::string& out, const std::optional<double>& x) {
  out += ',';
  if (x) out += format_number(*x);
}

void append_cell(std::string& out, const std::optional<int>& x) {
  out += ',';
  if (x) out += std::to_string(*x);
}

bool near(double got, double want) { return std::abs(got - want) <= kConsistencyTol; }

double require(const std::optional<double>& x, const char* what, const ReportRow& row) {
  if (!x)
    throw Error(std::string(what) + " missing on " + row.kind + " row (method " +
                row.method + ", seed " + row.seed + ")");
  return *x;
}

// Detail rows feeding a derived row: ok status and a PP estimate present.
bool usable(const ReportRow& row) { return row.status == "ok" && row.u && row.v; }

std::vector<std::pair<double, double>> collect_pp(const std::vector<ReportRow>& rows,
                                                  const std::string& method,
                                                  const std::string& seed,
                                                  const std::optional<int>& n) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : rows)
    if (row.kind == "pp" && row.method == method && row.seed == seed && usable(row) &&
        (!n || row.n == n))
      out.emplace_back(*row.u, *row.v);
  return out;
}

void check_point(const ReportRow& row, const PointStats& want) {
  if (!near(require(row.u, "u", row), want.mean_u) ||
      !near(require(row.v, "v", row), want.mean_v))
    throw Error(row.kind + " row (method " + row.method + ", seed " + row.seed +
                ") disagrees with recomputation from its detail rows");
}

void check_spread(const ReportRow& row, const PointStats& want) {
  check_point(row, want);
  if (!near(require(row.std_u, "std_u", row), want.std_u) ||
      !near(require(row.std_v, "std_v", row), want.std_v))
    throw Error(row.kind + " row (method " + row.method + ", seed " + row.seed +
                ") std disagrees with recomputation from its detail rows");
}

// The sample a summary row describes: that seed's centroid rows, or, for
// experiments without a centroid level, its pp rows directly.
std::vector<std::pair<double, double>> summary_sample(const std::vector<ReportRow>& rows,
                                                      const std::string& method,
                                                      const std::string& seed) {
  std::vector<std::pair<double, double>> sample;
  for (const auto& row : rows)
    if (row.kind == "centroid" && row.method == method && row.seed == seed && usable(row))
      sample.emplace_back(*row.u, *row.v);
  if (sample.empty()) sample = collect_pp(rows, method, seed, std::nullopt);
  return sample;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x + 0.0);  // + 0.0 folds -0 into 0
  return buf;
}

PointStats point_stats(const std::vector<std::pair<double, double>>& points) {
  PointStats s;
  s.count = points.size();
  if (points.empty()) return s;
  for (const auto& [u, v] : points) {
    s.mean_u += u;
    s.mean_v += v;
  }
  s.mean_u /= static_cast<double>(s.count);
  s.mean_v /= static_cast<double>(s.count);
  double var_u = 0.0;
  double var_v = 0.0;
  for (const auto& [u, v] : points) {
    var_u += (u - s.mean_u) * (u - s.mean_u);
    var_v += (v - s.mean_v) * (v - s.mean_v);
  }
  s.std_u = std::sqrt(var_u / static_cast<double>(s.count));
  s.std_v = std::sqrt(var_v / static_cast<double>(s.count));
  return s;
}

void verify_report_consistency(const ExperimentReport& report) {
  const auto& rows = report.rows;
  const bool have_aggregate =
      std::any_of(rows.begin(), rows.end(),
                  [](const ReportRow& r) { return r.kind == "aggregate"; });

  for (const auto& row : rows) {
    if (row.seed.empty())
      throw Error("report row without a seed (kind " + row.kind + ")");
    if (row.status != "ok" && row.kind != "pp" && row.kind != "deflection")
      continue;  // a failed derived row carries no numbers to check

    if (row.kind == "centroid") {
      auto sample = collect_pp(rows, row.method, row.seed, row.n);
      if (sample.empty())
        throw Error("centroid row (method " + row.method + ", seed " + row.seed +
                    ") has no usable pp rows");
      check_point(row, point_stats(sample));
    } else if (row.kind == "summary") {
      auto sample = summary_sample(rows, row.method, row.seed);
      if (sample.empty())
        throw Error("summary row (method " + row.method + ", seed " + row.seed +
                    ") has no usable detail rows");
      check_spread(row, point_stats(sample));
    } else if (row.kind == "aggregate") {
      // Mean over the per-seed summary rows, component-wise; the seed cell
      // names the seeds it folded together.
      PointStats want;
      double std_u = 0.0;
      double std_v = 0.0;
      std::string label;
      std::size_t count = 0;
      for (const auto& s : rows) {
        if (s.kind != "summary" || s.method != row.method || !usable(s)) continue;
        want.mean_u += *s.u;
        want.mean_v += *s.v;
        std_u += require(s.std_u, "std_u", s);
        std_v += require(s.std_v, "std_v", s);
        if (!label.empty()) label += '+';
        label += s.seed;
        ++count;
      }
      if (count == 0)
        throw Error("aggregate row (method " + row.method + ") has no summary rows");
      want.mean_u /= static_cast<double>(count);
      want.mean_v /= static_cast<double>(count);
      want.std_u = std_u / static_cast<double>(count);
      want.std_v = std_v / static_cast<double>(count);
      check_spread(row, want);
      if (row.seed != label)
        throw Error("aggregate row seed cell '" + row.seed + "' does not name its seeds ('" +
                    label + "')");
    } else if (row.kind == "ratio") {
      // zhang spread over pl spread, from the aggregate level when present.
      const std::string source = have_aggregate ? "aggregate" : "summary";
      const ReportRow* pl = nullptr;
      const ReportRow* zhang = nullptr;
      for (const auto& s : rows) {
        if (s.kind != source || s.status != "ok" || s.seed != row.seed) continue;
        if (s.method == "pl") pl = &s;
        if (s.method == "zhang") zhang = &s;
      }
      if (!pl || !zhang)
        throw Error("ratio row (seed " + row.seed + ") lacks a " + source +
                    " row for one of its methods");
      if (!near(require(row.std_u, "std_u", row),
                require(zhang->std_u, "std_u", *zhang) / require(pl->std_u, "std_u", *pl)) ||
          !near(require(row.std_v, "std_v", row),
                require(zhang->std_v, "std_v", *zhang) / require(pl->std_v, "std_v", *pl)))
        throw Error("ratio row (seed " + row.seed + ") disagrees with its " + source + " rows");
    }
  }
}

std::string render_report_csv(const ExperimentReport& report) {
  verify_report_consistency(report);

  auto entries = report.config_entries;
  std::sort(entries.begin(), entries.end());

  std::string out;
  for (const auto& [key, value] : entries) out += "# " + key + " = " + value + "\n";
  for (const auto& note : report.notes) out += "# note: " + note + "\n";
  out += kHeader;
  out += '\n';
  for (const auto& row : report.rows) {
    out += row.experiment;
    out += ',';
    out += row.kind;
    out += ',';
    out += row.method;
    out += ',';
    out += row.seed;
    append_cell(out, row.n);
    append_cell(out, row.skip_start);
    append_cell(out, row.tx);
    append_cell(out, row.ty);
    append_cell(out, row.alpha_deg);
    out += ',';
    out += row.pose_id;
    append_cell(out, row.u);
    append_cell(out, row.v);
    append_cell(out, row.rms_px);
    append_cell(out, row.angle_deg);
    append_cell(out, row.offset_px);
    append_cell(out, row.std_u);
    append_cell(out, row.std_v);
    out += ',';
    out += row.status;
    out += '\n';
  }
  return out;
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
  const std::string text = render_report_csv(report);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw IoError("failed writing " + path);
}

}  // namespace plcalib
