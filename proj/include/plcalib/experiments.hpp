#pragma once

#include <vector>

#include "plcalib/config.hpp"
#include "plcalib/report.hpp"
#include "plcalib/scene.hpp"

namespace plcalib {

// The experiment runners. Each renders its scenes from the config (or accepts
// externally supplied observations), runs the selected estimators, and returns
// a report whose derived rows (centroid/summary/aggregate/ratio) satisfy
// verify_report_consistency. Estimation failures inside one cell are recorded
// in that row's status column and the run continues; only config and input
// validation abort.

// The configured pose ring, rendered with the given master seed — the same
// observations the skip and calibration runners consume.
std::vector<ObservationSet> render_config_ring(const ExperimentConfig& config,
                                               std::uint64_t seed);

// Deflection of the estimated principal line against the untranslated pose's
// ground-truth line, per grid translation, in both the x and the y direction,
// for alpha = 0 and its 180-degree partner. Rows: kind "deflection", ordered
// by (direction, translation, alpha).
ExperimentReport run_translation_sweep(const ExperimentConfig& config);

// Skip-n protocol at the configured translation: for every n in 0..skip_max_n
// and every cyclic skip start, the principal point of the remaining ring by
// the selected method(s). The principal-line path intersects the per-pose
// lines directly (no outlier trimming — the protocol studies the raw drift).
// Emits pp rows, per-n centroid rows, per-seed summary rows (mean/std of the
// centroids), cross-seed aggregate rows when several trials ran, and a
// zhang/pl std ratio row when both methods ran.
ExperimentReport run_skip_experiment(const ExperimentConfig& config);

// Same protocol over observations from elsewhere (e.g. an ingested corner
// file) instead of rendered ones; single pass, the config's trial count does
// not apply. skip_max_n is clamped to ring.size() - 3 when the ring is small
// (recorded as a report note).
ExperimentReport run_skip_experiment(const ExperimentConfig& config,
                                     const std::vector<ObservationSet>& ring);

// Principal point from every 2-pair combination of the configured 180-degree
// pose pairs, plus the all-pairs estimate (pose_id "all"), plus a summary row
// with the spread over all of them.
ExperimentReport run_pair_evaluation(const ExperimentConfig& config);

// One full calibration of the rendered ring: principal-line estimate with
// outlier trimming (per the config knobs), and the baseline's linear and
// refined solutions (pose_id "linear" / "refined"). Recovered intrinsics are
// recorded as report notes.
ExperimentReport run_calibration(const ExperimentConfig& config);

// Calibration of externally supplied observations.
ExperimentReport run_calibration(const ExperimentConfig& config,
                                 const std::vector<ObservationSet>& observations);

}  // namespace plcalib
