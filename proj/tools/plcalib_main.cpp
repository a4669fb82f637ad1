// Command-line front end: runs the experiment suite against a config file
// (or the built-in defaults) and writes CSV reports / SVG plots.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plcalib/corner_io.hpp"
#include "plcalib/errors.hpp"
#include "plcalib/experiments.hpp"
#include "plcalib/svg.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string method;
  std::string corners_path;
  bool svg = false;
};

// Config from --config (defaults when absent), with flags overriding keys.
plcalib::ExperimentConfig effective_config(const CommonFlags& flags) {
  plcalib::ExperimentConfig config;
  if (!flags.config_path.empty()) config = plcalib::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.method.empty()) config.method = plcalib::parse_method(flags.method);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  plcalib::validate_config(config);
  return config;
}

fs::path out_file(const plcalib::ExperimentConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return fs::path(config.out_dir) / name;
}

std::string opt_str(const std::optional<double>& x) {
  return x ? plcalib::format_number(*x) : std::string("-");
}

void write_outputs(const plcalib::ExperimentReport& report,
                   const plcalib::ExperimentConfig& config, const std::string& stem,
                   bool svg, std::optional<plcalib::PlotKind> kind) {
  const fs::path csv = out_file(config, stem + ".csv");
  plcalib::write_report_csv(report, csv.string());
  std::cout << "wrote " << csv.string() << " (" << report.rows.size() << " rows)\n";
  if (svg && kind) {
    const fs::path plot = out_file(config, stem + ".svg");
    plcalib::write_svg(report, *kind, plot.string());
    std::cout << "wrote " << plot.string() << "\n";
  }
}

// The derived rows, compactly, so a terminal run shows the headline numbers
// without opening the CSV.
void print_derived_rows(const plcalib::ExperimentReport& report) {
  for (const auto& row : report.rows) {
    if (row.kind == "pp" || row.kind == "deflection" || row.kind == "centroid") continue;
    if (row.status != "ok") {
      std::cout << row.kind << " " << row.method << " seed " << row.seed << ": "
                << row.status << "\n";
      continue;
    }
    if (row.kind == "ratio") {
      std::cout << "ratio zhang/pl (seed " << row.seed << "): std_u " << opt_str(row.std_u)
                << ", std_v " << opt_str(row.std_v) << "\n";
    } else {
      std::cout << row.kind << " " << row.method << " (seed " << row.seed << "): mean ("
                << opt_str(row.u) << ", " << opt_str(row.v) << "), std ("
                << opt_str(row.std_u) << ", " << opt_str(row.std_v) << ")\n";
    }
  }
}

void run_sweep(const CommonFlags& flags) {
  const auto config = effective_config(flags);
  const auto report = plcalib::run_translation_sweep(config);
  const plcalib::ReportRow* worst = nullptr;
  for (const auto& row : report.rows)
    if (row.status == "ok" && row.offset_px &&
        (worst == nullptr || *row.offset_px > *worst->offset_px))
      worst = &row;
  write_outputs(report, config, "sweep", flags.svg, plcalib::PlotKind::kSweepCurves);
  if (worst)
    std::cout << "largest deflection: " << opt_str(worst->angle_deg) << " deg / "
              << opt_str(worst->offset_px) << " px at " << worst->pose_id << "\n";
}

void run_skip(const CommonFlags& flags) {
  const auto config = effective_config(flags);
  plcalib::ExperimentReport report;
  if (flags.corners_path.empty()) {
    report = plcalib::run_skip_experiment(config);
  } else {
    report = plcalib::run_skip_experiment(config,
                                          plcalib::ingest_corner_file(flags.corners_path));
  }
  write_outputs(report, config, "skip", flags.svg, plcalib::PlotKind::kSkipScatter);
  print_derived_rows(report);
}

void run_pairs(const CommonFlags& flags) {
  const auto config = effective_config(flags);
  const auto report = plcalib::run_pair_evaluation(config);
  write_outputs(report, config, "pairs", flags.svg, plcalib::PlotKind::kPairsScatter);
  print_derived_rows(report);
}

void run_calibrate(const CommonFlags& flags) {
  const auto config = effective_config(flags);
  plcalib::ExperimentReport report;
  if (flags.corners_path.empty()) {
    report = plcalib::run_calibration(config);
  } else {
    report =
        plcalib::run_calibration(config, plcalib::ingest_corner_file(flags.corners_path));
  }
  write_outputs(report, config, "calibrate", false, std::nullopt);
  for (const auto& note : report.notes) std::cout << note << "\n";
  for (const auto& row : report.rows)
    if (row.status != "ok")
      std::cout << row.method << (row.pose_id.empty() ? "" : " " + row.pose_id) << ": "
                << row.status << "\n";
}

// End-to-end demonstration of the corner-file path: render a ring, write it
// out, read it back, and run the skip protocol on both copies. The reports
// must match byte for byte; a mismatch exits nonzero.
int run_ingest_demo(const CommonFlags& flags) {
  auto config = effective_config(flags);
  config.trials = 1;  // one ring is written, so compare a one-trial run

  const auto sets = plcalib::render_config_ring(config, config.seed);
  const fs::path corners = out_file(config, "demo_corners.csv");
  plcalib::write_corner_file(corners.string(), sets, plcalib::config_board(config));
  std::size_t corner_count = 0;
  for (const auto& set : sets) corner_count += set.correspondences.size();
  std::cout << "wrote " << corners.string() << " (" << sets.size() << " poses, "
            << corner_count << " corners)\n";

  const auto ingested = plcalib::ingest_corner_file(corners.string());
  const auto from_memory = plcalib::run_skip_experiment(config, sets);
  const auto from_file = plcalib::run_skip_experiment(config, ingested);

  plcalib::write_report_csv(from_memory, out_file(config, "demo_memory.csv").string());
  plcalib::write_report_csv(from_file, out_file(config, "demo_ingested.csv").string());
  const bool identical =
      plcalib::render_report_csv(from_memory) == plcalib::render_report_csv(from_file);
  std::cout << "wrote demo_memory.csv and demo_ingested.csv\n"
            << "reports byte-identical: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_svg, bool with_corners) {
  cmd->add_option("--config", flags.config_path, "experiment config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out_dir, "output directory (overrides out_dir)");
  cmd->add_option("--seed", flags.seed, "master seed (overrides seed)");
  cmd->add_option("--method", flags.method, "pl | zhang | both (overrides method)");
  if (with_svg) cmd->add_flag("--svg", flags.svg, "also write an SVG plot");
  if (with_corners)
    cmd->add_option("--corners", flags.corners_path,
                    "corner CSV to use instead of rendered observations")
        ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"principal-line camera calibration experiments"};
  app.require_subcommand(1);
  CommonFlags flags;
  int exit_code = 0;

  auto* sweep = app.add_subcommand("sweep", "principal-line deflection vs board translation");
  add_common(sweep, flags, true, false);
  sweep->callback([&] { run_sweep(flags); });

  auto* skip = app.add_subcommand("skip", "skip-n principal point drift, both methods");
  add_common(skip, flags, true, true);
  skip->callback([&] { run_skip(flags); });

  auto* pairs = app.add_subcommand("pairs", "principal point from 180-degree pose pairs");
  add_common(pairs, flags, true, false);
  pairs->callback([&] { run_pairs(flags); });

  auto* calibrate = app.add_subcommand("calibrate", "full calibration of one pose ring");
  add_common(calibrate, flags, false, true);
  calibrate->callback([&] { run_calibrate(flags); });

  auto* demo = app.add_subcommand(
      "ingest-demo", "write a synthetic corner file, re-ingest it, compare reports");
  add_common(demo, flags, false, false);
  demo->callback([&] { exit_code = run_ingest_demo(flags); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const plcalib::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
