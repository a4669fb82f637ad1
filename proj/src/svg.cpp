#include "plcalib/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>
#include <vector>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {

// Fixed canvas; the data window is mapped into the plot rectangle.
constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kPlotLeft = 70.0;
constexpr double kPlotRight = 620.0;
constexpr double kPlotTop = 50.0;
constexpr double kPlotBottom = 540.0;
constexpr int kTicks = 5;

// n = 0 (full ring) in black, then the per-n colors.
const char* const kSkipColors[6] = {"#000000", "#800080", "#008000",
                                    "#ff8c00", "#008b8b", "#d62728"};
const char* const kCurveColors[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fmt2(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", x + 0.0);
  return buf;
}

std::string fmt_tick(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x + 0.0);
  return buf;
}

struct Window {
  double min_x = 0.0;
  double max_x = 1.0;
  double min_y = 0.0;
  double max_y = 1.0;
};

Window fit_window(const std::vector<std::pair<double, double>>& points) {
  Window w;
  w.min_x = w.max_x = points.front().first;
  w.min_y = w.max_y = points.front().second;
  for (const auto& [x, y] : points) {
    w.min_x = std::min(w.min_x, x);
    w.max_x = std::max(w.max_x, x);
    w.min_y = std::min(w.min_y, y);
    w.max_y = std::max(w.max_y, y);
  }
  double pad_x = 0.05 * (w.max_x - w.min_x);
  double pad_y = 0.05 * (w.max_y - w.min_y);
  if (pad_x == 0.0) pad_x = 1.0;  // degenerate span: open a unit window
  if (pad_y == 0.0) pad_y = 1.0;
  w.min_x -= pad_x;
  w.max_x += pad_x;
  w.min_y -= pad_y;
  w.max_y += pad_y;
  return w;
}

// Maps data coordinates into the plot rectangle. y_down follows the pixel
// convention (v grows downward, matching SVG) for scatter plots; curves use
// the usual upward axis.
struct Mapper {
  Window w;
  bool y_down = false;

  double x(double v) const {
    return kPlotLeft + (v - w.min_x) / (w.max_x - w.min_x) * (kPlotRight - kPlotLeft);
  }
  double y(double v) const {
    const double frac = (v - w.min_y) / (w.max_y - w.min_y);
    return y_down ? kPlotTop + frac * (kPlotBottom - kPlotTop)
                  : kPlotBottom - frac * (kPlotBottom - kPlotTop);
  }
};

void open_document(std::string& out, const std::string& title, const Window& w) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<title>" + title + "</title>\n";
  out += "<desc>window x [" + format_number(w.min_x) + ", " + format_number(w.max_x) +
         "] y [" + format_number(w.min_y) + ", " + format_number(w.max_y) + "]</desc>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + fmt2(kPlotLeft) + "\" y=\"30\" font-size=\"16\">" + title +
         "</text>\n";
}

void draw_axes(std::string& out, const Mapper& m, const std::string& x_label,
               const std::string& y_label) {
  // Gridlines and tick labels at a fixed count of evenly spaced data values.
  for (int i = 0; i < kTicks; ++i) {
    const double fx =
        m.w.min_x + (m.w.max_x - m.w.min_x) * static_cast<double>(i) / (kTicks - 1);
    const double fy =
        m.w.min_y + (m.w.max_y - m.w.min_y) * static_cast<double>(i) / (kTicks - 1);
    const std::string gx = fmt2(m.x(fx));
    const std::string gy = fmt2(m.y(fy));
    out += "<line x1=\"" + gx + "\" y1=\"" + fmt2(kPlotTop) + "\" x2=\"" + gx + "\" y2=\"" +
           fmt2(kPlotBottom) + "\" stroke=\"#dddddd\"/>\n";
    out += "<line x1=\"" + fmt2(kPlotLeft) + "\" y1=\"" + gy + "\" x2=\"" +
           fmt2(kPlotRight) + "\" y2=\"" + gy + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + gx + "\" y=\"" + fmt2(kPlotBottom + 18.0) +
           "\" text-anchor=\"middle\">" + fmt_tick(fx) + "</text>\n";
    out += "<text x=\"" + fmt2(kPlotLeft - 8.0) + "\" y=\"" + gy +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + fmt_tick(fy) +
           "</text>\n";
  }
  out += "<rect x=\"" + fmt2(kPlotLeft) + "\" y=\"" + fmt2(kPlotTop) + "\" width=\"" +
         fmt2(kPlotRight - kPlotLeft) + "\" height=\"" + fmt2(kPlotBottom - kPlotTop) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
  out += "<text x=\"" + fmt2((kPlotLeft + kPlotRight) / 2.0) + "\" y=\"" +
         fmt2(kPlotBottom + 40.0) + "\" text-anchor=\"middle\">" + x_label + "</text>\n";
  out += "<text x=\"18\" y=\"" + fmt2((kPlotTop + kPlotBottom) / 2.0) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt2((kPlotTop + kPlotBottom) / 2.0) + ")\">" + y_label + "</text>\n";
}

void legend_entry(std::string& out, int slot, const std::string& color,
                  const std::string& text, bool filled) {
  const double y = 60.0 + 22.0 * slot;
  out += "<rect x=\"640\" y=\"" + fmt2(y) + "\" width=\"12\" height=\"12\" fill=\"" +
         (filled ? color : std::string("none")) + "\" stroke=\"" + color + "\"/>\n";
  out += "<text x=\"658\" y=\"" + fmt2(y + 10.0) + "\">" + text + "</text>\n";
}

void marker(std::string& out, const Mapper& m, double u, double v,
            const std::string& color, bool open_square, double size) {
  if (open_square) {
    out += "<rect x=\"" + fmt2(m.x(u) - size) + "\" y=\"" + fmt2(m.y(v) - size) +
           "\" width=\"" + fmt2(2.0 * size) + "\" height=\"" + fmt2(2.0 * size) +
           "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
  } else {
    out += "<circle cx=\"" + fmt2(m.x(u)) + "\" cy=\"" + fmt2(m.y(v)) + "\" r=\"" +
           fmt2(size) + "\" fill=\"" + color + "\"/>\n";
  }
}

bool plottable_pp(const ReportRow& row) {
  return row.kind == "pp" && row.status == "ok" && row.u && row.v;
}

std::string render_skip_scatter(const ExperimentReport& report) {
  std::vector<const ReportRow*> rows;
  for (const auto& row : report.rows)
    if (plottable_pp(row) && row.n) rows.push_back(&row);
  if (rows.empty()) throw EmptySelection("no pp rows with a skip length to plot");

  std::vector<std::pair<double, double>> points;
  for (const auto* row : rows) points.emplace_back(*row->u, *row->v);
  const Mapper m{fit_window(points), /*y_down=*/true};

  std::string out;
  open_document(out, report.experiment + ": principal point scatter by skip length",
                m.w);
  draw_axes(out, m, "u (px)", "v (px)");

  bool has_zhang = false;
  std::vector<int> ns;
  for (const auto* row : rows) {
    const int n = std::min(*row->n, 5);
    marker(out, m, *row->u, *row->v, kSkipColors[n],
           /*open_square=*/row->method == "zhang", 4.0);
    if (row->method == "zhang") has_zhang = true;
    if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
  }

  std::sort(ns.begin(), ns.end());
  int slot = 0;
  for (int n : ns) legend_entry(out, slot++, kSkipColors[n], "n = " + std::to_string(n), true);
  if (has_zhang) {
    legend_entry(out, slot++, "#000000", "pl: filled circle", true);
    legend_entry(out, slot++, "#000000", "zhang: open square", false);
  }
  out += "</svg>\n";
  return out;
}

std::string render_sweep_curves(const ExperimentReport& report) {
  // One series per (direction prefix of the pose id, alpha); points keyed by
  // translation magnitude.
  struct Point {
    double t;
    double offset;
  };
  std::map<std::pair<std::string, double>, std::vector<Point>> series;
  std::vector<std::pair<double, double>> points;
  for (const auto& row : report.rows) {
    if (row.kind != "deflection" || row.status != "ok" || !row.offset_px || !row.tx ||
        !row.ty || !row.alpha_deg)
      continue;
    const std::string prefix = row.pose_id.substr(0, row.pose_id.find('_'));
    const double t = std::max(std::abs(*row.tx), std::abs(*row.ty));
    series[{prefix, *row.alpha_deg}].push_back({t, *row.offset_px});
    points.emplace_back(t, *row.offset_px);
  }
  if (points.empty()) throw EmptySelection("no deflection rows to plot");

  const Mapper m{fit_window(points), /*y_down=*/false};
  std::string out;
  open_document(out, report.experiment + ": deflection offset vs translation", m.w);
  draw_axes(out, m, "translation (px)", "offset (px)");

  int slot = 0;
  for (auto& [key, pts] : series) {
    const std::string color = kCurveColors[slot % 4];
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.t < b.t; });
    std::string poly;
    for (const auto& p : pts) {
      if (!poly.empty()) poly += ' ';
      poly += fmt2(m.x(p.t)) + "," + fmt2(m.y(p.offset));
    }
    out += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    for (const auto& p : pts) marker(out, m, p.t, p.offset, color, false, 3.0);
    legend_entry(out, slot++, color,
                 key.first + ", alpha = " + fmt_tick(key.second), true);
  }
  out += "</svg>\n";
  return out;
}

std::string render_pairs_scatter(const ExperimentReport& report) {
  std::vector<const ReportRow*> rows;
  for (const auto& row : report.rows)
    if (plottable_pp(row)) rows.push_back(&row);
  if (rows.empty()) throw EmptySelection("no pp rows to plot");

  std::vector<std::pair<double, double>> points;
  for (const auto* row : rows) points.emplace_back(*row->u, *row->v);
  const Mapper m{fit_window(points), /*y_down=*/true};

  std::string out;
  open_document(out, report.experiment + ": pair-combination estimates", m.w);
  draw_axes(out, m, "u (px)", "v (px)");

  bool has_all = false;
  for (const auto* row : rows) {
    if (row->pose_id == "all") {
      marker(out, m, *row->u, *row->v, "#d62728", true, 6.0);
      has_all = true;
    } else {
      marker(out, m, *row->u, *row->v, "#000000", false, 4.0);
    }
  }
  legend_entry(out, 0, "#000000", "2-pair combination", true);
  if (has_all) legend_entry(out, 1, "#d62728", "all pairs", false);
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string render_svg(const ExperimentReport& report, PlotKind kind) {
  verify_report_consistency(report);
  switch (kind) {
    case PlotKind::kSkipScatter:
      return render_skip_scatter(report);
    case PlotKind::kSweepCurves:
      return render_sweep_curves(report);
    case PlotKind::kPairsScatter:
      return render_pairs_scatter(report);
  }
  throw Error("unknown plot kind");
}

void write_svg(const ExperimentReport& report, PlotKind kind, const std::string& path) {
  const std::string text = render_svg(report, kind);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw IoError("failed writing " + path);
}

}  // namespace plcalib
