#include "plcalib/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "plcalib/camera.hpp"
#include "plcalib/errors.hpp"
#include "plcalib/homography.hpp"
#include "plcalib/image_line.hpp"
#include "plcalib/principal_line.hpp"
#include "plcalib/zhang.hpp"

namespace plcalib {

namespace {

// Status tags are the error type names, so a report row names its failure the
// same way the exception hierarchy does.
std::string error_tag(const Error& e) {
#define PLCALIB_TAG(T) \
  if (dynamic_cast<const T*>(&e) != nullptr) return #T;
  PLCALIB_TAG(NearParallelLines)
  PLCALIB_TAG(TooFewLines)
  PLCALIB_TAG(DegenerateFrontalPose)
  PLCALIB_TAG(IllConditioned)
  PLCALIB_TAG(DegenerateConfiguration)
  PLCALIB_TAG(TooFewPoints)
  PLCALIB_TAG(DegenerateSet)
  PLCALIB_TAG(Diverged)
  PLCALIB_TAG(NoConvergence)
  PLCALIB_TAG(RankDeficient)
  PLCALIB_TAG(BehindCamera)
  PLCALIB_TAG(TooFewRemaining)
  PLCALIB_TAG(InvalidDimensions)
#undef PLCALIB_TAG
  return "Error";
}

ZhangOptions zhang_options(const ExperimentConfig& c) {
  ZhangOptions opts;
  opts.refine = c.zhang_refine;
  opts.image_width = c.image_width;
  opts.image_height = c.image_height;
  return opts;
}

// Per-pose principal lines. A pose that fails keeps its error tag so every
// subset containing it can report the cause in its own row.
struct RingLines {
  std::vector<std::optional<ImageLine>> lines;
  std::vector<std::string> tags;
  std::vector<std::string> ids;
};

RingLines ring_lines(const std::vector<ObservationSet>& sets) {
  RingLines out;
  for (const auto& set : sets) {
    out.ids.push_back(set.pose_id);
    try {
      out.lines.push_back(principal_line_from_homography(estimate_homography(set)));
      out.tags.emplace_back();
    } catch (const Error& e) {
      out.lines.push_back(std::nullopt);
      out.tags.push_back(error_tag(e));
    }
  }
  return out;
}

void skip_rows_for_seed(const ExperimentConfig& config,
                        const std::vector<ObservationSet>& sets, int max_n,
                        const std::string& seed_label, std::vector<ReportRow>& rows) {
  const int count = static_cast<int>(sets.size());
  const RingLines pl =
      config.method != Method::kZhang ? ring_lines(sets) : RingLines{};
  const ZhangOptions zopts = zhang_options(config);

  const auto emit_method = [&](const std::string& method) {
    std::vector<std::pair<double, double>> centroid_sample;  // ok centroids
    std::vector<std::pair<double, double>> pp_sample;        // all ok pp rows
    for (int n = 0; n <= max_n; ++n) {
      std::vector<std::vector<int>> subsets;
      try {
        subsets = skip_sets(count, n);
      } catch (const Error& e) {
        ReportRow row;
        row.experiment = "skip";
        row.kind = "pp";
        row.method = method;
        row.seed = seed_label;
        row.n = n;
        row.tx = config.tx;
        row.ty = config.ty;
        row.status = error_tag(e);
        rows.push_back(std::move(row));
        continue;
      }
      std::vector<std::pair<double, double>> group;
      for (int s = 0; s < static_cast<int>(subsets.size()); ++s) {
        ReportRow row;
        row.experiment = "skip";
        row.kind = "pp";
        row.method = method;
        row.seed = seed_label;
        row.n = n;
        if (n > 0) row.skip_start = s;
        row.tx = config.tx;
        row.ty = config.ty;
        if (method == "pl") {
          std::string missing;
          for (int idx : subsets[s])
            if (!pl.lines[idx]) {
              missing = pl.tags[idx];
              break;
            }
          if (!missing.empty()) {
            row.status = missing;
          } else {
            std::vector<ImageLine> lines;
            std::vector<std::string> ids;
            for (int idx : subsets[s]) {
              lines.push_back(*pl.lines[idx]);
              ids.push_back(pl.ids[idx]);
            }
            try {
              const PrincipalPointEstimate est =
                  principal_point_from_lines(lines, ids, config.min_separation_deg);
              row.u = est.pp.x();
              row.v = est.pp.y();
              row.rms_px = est.rms_distance;
            } catch (const Error& e) {
              row.status = error_tag(e);
            }
          }
        } else {
          try {
            const Eigen::Vector2d pp = baseline_pp_for_subset(sets, subsets[s], zopts);
            row.u = pp.x();
            row.v = pp.y();
          } catch (const Error& e) {
            row.status = error_tag(e);
          }
        }
        if (row.status == "ok") {
          if (n > 0) group.emplace_back(*row.u, *row.v);
          pp_sample.emplace_back(*row.u, *row.v);
        }
        rows.push_back(std::move(row));
      }
      if (n > 0) {
        ReportRow centroid;
        centroid.experiment = "skip";
        centroid.kind = "centroid";
        centroid.method = method;
        centroid.seed = seed_label;
        centroid.n = n;
        centroid.tx = config.tx;
        centroid.ty = config.ty;
        if (group.empty()) {
          centroid.status = "NoEstimates";
        } else {
          const PointStats stats = point_stats(group);
          centroid.u = stats.mean_u;
          centroid.v = stats.mean_v;
          centroid_sample.emplace_back(stats.mean_u, stats.mean_v);
        }
        rows.push_back(std::move(centroid));
      }
    }
    ReportRow summary;
    summary.experiment = "skip";
    summary.kind = "summary";
    summary.method = method;
    summary.seed = seed_label;
    summary.tx = config.tx;
    summary.ty = config.ty;
    const auto& sample = centroid_sample.empty() ? pp_sample : centroid_sample;
    if (sample.empty()) {
      summary.status = "NoEstimates";
    } else {
      const PointStats stats = point_stats(sample);
      summary.u = stats.mean_u;
      summary.v = stats.mean_v;
      summary.std_u = stats.std_u;
      summary.std_v = stats.std_v;
    }
    rows.push_back(std::move(summary));
  };

  if (config.method != Method::kZhang) emit_method("pl");
  if (config.method != Method::kPl) emit_method("zhang");
}

// Component-wise mean over a method's ok summary rows, with the joined seed
// label; count 1 is the single-summary passthrough used by the ratio row.
struct SummarySpread {
  double u = 0.0;
  double v = 0.0;
  double std_u = 0.0;
  double std_v = 0.0;
  std::string seed;
  int count = 0;
};

SummarySpread spread_over_summaries(const ExperimentReport& report, const std::string& method) {
  SummarySpread sp;
  for (const auto& row : report.rows) {
    if (row.kind != "summary" || row.method != method || row.status != "ok") continue;
    sp.u += *row.u;
    sp.v += *row.v;
    sp.std_u += *row.std_u;
    sp.std_v += *row.std_v;
    if (!sp.seed.empty()) sp.seed += '+';
    sp.seed += row.seed;
    ++sp.count;
  }
  if (sp.count > 0) {
    sp.u /= sp.count;
    sp.v /= sp.count;
    sp.std_u /= sp.count;
    sp.std_v /= sp.count;
  }
  return sp;
}

void finalize_skip(const ExperimentConfig& config, ExperimentReport& report) {
  const bool run_pl = config.method != Method::kZhang;
  const bool run_zhang = config.method != Method::kPl;
  const SummarySpread pl = run_pl ? spread_over_summaries(report, "pl") : SummarySpread{};
  const SummarySpread zhang =
      run_zhang ? spread_over_summaries(report, "zhang") : SummarySpread{};

  // Cross-seed aggregates only when several trials produced summaries.
  bool have_aggregate = false;
  const auto emit_aggregate = [&](const std::string& method, const SummarySpread& sp) {
    if (sp.count < 2) return;
    ReportRow row;
    row.experiment = "skip";
    row.kind = "aggregate";
    row.method = method;
    row.seed = sp.seed;
    row.tx = config.tx;
    row.ty = config.ty;
    row.u = sp.u;
    row.v = sp.v;
    row.std_u = sp.std_u;
    row.std_v = sp.std_v;
    report.rows.push_back(std::move(row));
    have_aggregate = true;
  };
  if (run_pl) emit_aggregate("pl", pl);
  if (run_zhang) emit_aggregate("zhang", zhang);

  if (config.method != Method::kBoth) return;

  ReportRow ratio;
  ratio.experiment = "skip";
  ratio.kind = "ratio";
  ratio.method = "zhang/pl";
  ratio.tx = config.tx;
  ratio.ty = config.ty;
  const bool sources_ok = pl.count > 0 && zhang.count > 0 && pl.seed == zhang.seed &&
                          (!have_aggregate || (pl.count >= 2 && zhang.count >= 2));
  if (!sources_ok) {
    ratio.seed = !zhang.seed.empty() ? zhang.seed
                 : !pl.seed.empty()  ? pl.seed
                                     : std::to_string(config.seed);
    ratio.status = "NoEstimates";
  } else if (pl.std_u == 0.0 || pl.std_v == 0.0) {
    ratio.seed = pl.seed;
    ratio.status = "ZeroSpread";
  } else {
    ratio.seed = pl.seed;
    ratio.std_u = zhang.std_u / pl.std_u;
    ratio.std_v = zhang.std_v / pl.std_v;
  }
  report.rows.push_back(std::move(ratio));
}

}  // namespace

std::vector<ObservationSet> render_config_ring(const ExperimentConfig& config,
                                               std::uint64_t seed) {
  const CameraIntrinsics cam = config_camera(config);
  const RadialDistortion dist = config_distortion(config);
  const Checkerboard board = config_board(config);
  std::vector<ObservationSet> sets;
  for (const auto& recipe :
       pose_ring(config_base_recipe(config), config.ring_count, config.alpha_step_deg))
    sets.push_back(render_corners(cam, dist, recipe, board, config.noise_sigma, seed));
  return sets;
}

ExperimentReport run_translation_sweep(const ExperimentConfig& config) {
  validate_config(config);
  const CameraIntrinsics cam = config_camera(config);
  const RadialDistortion dist = config_distortion(config);
  const Checkerboard board = config_board(config);
  const std::string seed_label = std::to_string(config.seed);

  ExperimentReport report;
  report.experiment = "sweep";
  report.config_entries = resolved_entries(config);

  const int steps =
      static_cast<int>(std::floor((config.sweep_max - config.sweep_min) / config.sweep_step +
                                  1e-9)) +
      1;
  for (const char* dir : {"x", "y"}) {
    for (int i = 0; i < steps; ++i) {
      const double t = config.sweep_min + i * config.sweep_step;
      for (const double alpha : {0.0, 180.0}) {
        PoseRecipe recipe = config_base_recipe(config);
        recipe.alpha_deg = alpha;
        recipe.translation = dir[0] == 'x' ? Eigen::Vector2d(t, 0.0) : Eigen::Vector2d(0.0, t);
        recipe.pose_id =
            std::string(dir) + "_t" + format_number(t) + "_a" + format_number(alpha);

        ReportRow row;
        row.experiment = "sweep";
        row.kind = "deflection";
        row.method = "pl";
        row.seed = seed_label;
        row.tx = recipe.translation.x();
        row.ty = recipe.translation.y();
        row.alpha_deg = alpha;
        row.pose_id = recipe.pose_id;
        try {
          const ObservationSet obs =
              render_corners(cam, dist, recipe, board, config.noise_sigma, config.seed);
          const ImageLine line = principal_line_from_homography(estimate_homography(obs));
          PoseRecipe reference = recipe;
          reference.translation = Eigen::Vector2d::Zero();
          const ImageLine ref_line =
              ground_truth_principal_line(cam, realize_pose(reference));
          const DeflectionMeasure d =
              line_deflection(line, ref_line, Eigen::Vector2d(cam.u0, cam.v0));
          row.angle_deg = d.angle_deg;
          row.offset_px = d.offset_px;
        } catch (const Error& e) {
          row.status = error_tag(e);
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

ExperimentReport run_skip_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentReport report;
  report.experiment = "skip";
  report.config_entries = resolved_entries(config);
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
    const std::vector<ObservationSet> sets = render_config_ring(config, seed);
    skip_rows_for_seed(config, sets, config.skip_max_n, std::to_string(seed), report.rows);
  }
  finalize_skip(config, report);
  return report;
}

ExperimentReport run_skip_experiment(const ExperimentConfig& config,
                                     const std::vector<ObservationSet>& ring) {
  validate_config(config);
  ExperimentReport report;
  report.experiment = "skip";
  report.config_entries = resolved_entries(config);
  const int max_n =
      std::max(0, std::min(config.skip_max_n, static_cast<int>(ring.size()) - 3));
  if (max_n < config.skip_max_n)
    report.notes.push_back("skip_max_n clamped to " + std::to_string(max_n) + " for a " +
                           std::to_string(ring.size()) + "-pose ring");
  skip_rows_for_seed(config, ring, max_n, std::to_string(config.seed), report.rows);
  finalize_skip(config, report);
  return report;
}

ExperimentReport run_pair_evaluation(const ExperimentConfig& config) {
  validate_config(config);
  const CameraIntrinsics cam = config_camera(config);
  const RadialDistortion dist = config_distortion(config);
  const Checkerboard board = config_board(config);
  const std::string seed_label = std::to_string(config.seed);

  ExperimentReport report;
  report.experiment = "pairs";
  report.config_entries = resolved_entries(config);

  struct PairLines {
    std::string id;
    std::optional<std::pair<ImageLine, ImageLine>> lines;
    std::string tag;
  };
  std::vector<PairLines> pairs;
  for (std::size_t k = 0; k < config.pair_alphas.size(); ++k) {
    const auto recipes = paired_poses({config.pair_alphas[k]}, config_base_recipe(config));
    PairLines entry;
    entry.id = "p" + format_number(config.pair_alphas[k]);
    try {
      const auto line_of = [&](const PoseRecipe& recipe) {
        const ObservationSet obs =
            render_corners(cam, dist, recipe, board, config.noise_sigma, config.seed);
        return principal_line_from_homography(estimate_homography(obs));
      };
      entry.lines = {line_of(recipes[0].first), line_of(recipes[0].second)};
    } catch (const Error& e) {
      entry.tag = error_tag(e);
    }
    pairs.push_back(std::move(entry));
  }

  std::vector<std::pair<double, double>> sample;
  const auto emit_combo = [&](const std::vector<std::size_t>& members, const std::string& label) {
    ReportRow row;
    row.experiment = "pairs";
    row.kind = "pp";
    row.method = "pl";
    row.seed = seed_label;
    row.tx = config.tx;
    row.ty = config.ty;
    row.pose_id = label;
    std::string missing;
    for (const std::size_t k : members)
      if (!pairs[k].lines) {
        missing = pairs[k].tag;
        break;
      }
    if (!missing.empty()) {
      row.status = missing;
    } else {
      std::vector<std::pair<ImageLine, ImageLine>> bundle;
      std::vector<std::string> ids;
      for (const std::size_t k : members) {
        bundle.push_back(*pairs[k].lines);
        ids.push_back(pairs[k].id);
      }
      try {
        const PrincipalPointEstimate est =
            principal_point_from_pairs(bundle, ids, config.min_separation_deg);
        row.u = est.pp.x();
        row.v = est.pp.y();
        row.rms_px = est.rms_distance;
        sample.emplace_back(*row.u, *row.v);
      } catch (const Error& e) {
        row.status = error_tag(e);
      }
    }
    report.rows.push_back(std::move(row));
  };

  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      emit_combo({i, j}, pairs[i].id + "+" + pairs[j].id);
  std::vector<std::size_t> all(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) all[k] = k;
  emit_combo(all, "all");

  ReportRow summary;
  summary.experiment = "pairs";
  summary.kind = "summary";
  summary.method = "pl";
  summary.seed = seed_label;
  summary.tx = config.tx;
  summary.ty = config.ty;
  if (sample.empty()) {
    summary.status = "NoEstimates";
  } else {
    const PointStats stats = point_stats(sample);
    summary.u = stats.mean_u;
    summary.v = stats.mean_v;
    summary.std_u = stats.std_u;
    summary.std_v = stats.std_v;
  }
  report.rows.push_back(std::move(summary));
  return report;
}

ExperimentReport run_calibration(const ExperimentConfig& config) {
  validate_config(config);
  return run_calibration(config, render_config_ring(config, config.seed));
}

ExperimentReport run_calibration(const ExperimentConfig& config,
                                 const std::vector<ObservationSet>& observations) {
  validate_config(config);
  ExperimentReport report;
  report.experiment = "calibrate";
  report.config_entries = resolved_entries(config);
  const std::string seed_label = std::to_string(config.seed);

  if (config.method != Method::kZhang) {
    const RingLines pl = ring_lines(observations);
    std::vector<ImageLine> lines;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < pl.lines.size(); ++i) {
      if (pl.lines[i]) {
        lines.push_back(*pl.lines[i]);
        ids.push_back(pl.ids[i]);
      } else {
        report.notes.push_back("pl: line " + pl.ids[i] + " skipped (" + pl.tags[i] + ")");
      }
    }
    ReportRow row;
    row.experiment = "calibrate";
    row.kind = "pp";
    row.method = "pl";
    row.seed = seed_label;
    row.tx = config.tx;
    row.ty = config.ty;
    try {
      const OutlierRejection trimmed =
          reject_outlier_lines(lines, ids, config.max_reject_rounds,
                               config.outlier_threshold_px, config.min_separation_deg);
      for (const auto& id : trimmed.removed_ids)
        report.notes.push_back("pl: outlier line " + id + " removed");
      row.u = trimmed.estimate.pp.x();
      row.v = trimmed.estimate.pp.y();
      row.rms_px = trimmed.estimate.rms_distance;
      report.notes.push_back("pl: u0 = " + format_number(*row.u) + ", v0 = " +
                             format_number(*row.v) + ", rms line distance = " +
                             format_number(*row.rms_px) + " px");
    } catch (const Error& e) {
      row.status = error_tag(e);
    }
    report.rows.push_back(std::move(row));
  }

  if (config.method != Method::kPl) {
    const auto emit = [&](bool refine, const char* label) {
      ZhangOptions opts = zhang_options(config);
      opts.refine = refine;
      ReportRow row;
      row.experiment = "calibrate";
      row.kind = "pp";
      row.method = "zhang";
      row.seed = seed_label;
      row.tx = config.tx;
      row.ty = config.ty;
      row.pose_id = label;
      try {
        const CalibrationResult result = calibrate_zhang(observations, opts);
        row.u = result.intrinsics.u0;
        row.v = result.intrinsics.v0;
        row.rms_px = result.rms_reprojection;
        report.notes.push_back(std::string("zhang ") + label +
                               ": f = " + format_number(result.intrinsics.f) +
                               ", u0 = " + format_number(result.intrinsics.u0) +
                               ", v0 = " + format_number(result.intrinsics.v0) +
                               ", k1 = " + format_number(result.distortion.k1) +
                               ", k2 = " + format_number(result.distortion.k2) +
                               ", rms = " + format_number(result.rms_reprojection) + " px");
      } catch (const Error& e) {
        row.status = error_tag(e);
      }
      report.rows.push_back(std::move(row));
    };
    emit(false, "linear");
    if (config.zhang_refine) emit(true, "refined");
  }
  return report;
}

}  // namespace plcalib
