#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "plcalib/image_line.hpp"

namespace plcalib {

struct PrincipalPointEstimate {
  Eigen::Vector2d pp = Eigen::Vector2d::Zero();
  std::vector<double> per_line_distance;  // point-line distance per used line, pixels
  double rms_distance = 0.0;
  std::vector<std::string> lines_used;    // identifiers, in input order
};

struct DeflectionMeasure {
  double angle_deg = 0.0;  // acute angle to the reference line, [0, 90]
  double offset_px = 0.0;  // distance from the reference point to the line
};

// The central construction of this library. Under zero skew and unit aspect
// ratio the image of the absolute conic is determined by (u0, v0, w) with
// w = f^2 + u0^2 + v0^2, and the two orthonormality constraints
//   h1' w h2 = 0,   h1' w h1 = h2' w h2
// are linear in those three unknowns. One homography therefore leaves a
// one-parameter family of consistent principal points; eliminating w projects
// that family onto the (u0, v0) plane as a line — the principal line. It
// passes through the true principal point for any exact homography and tilts
// under the residual bias that radial distortion leaves in an estimated one.
// Throws DegenerateFrontalPose when the constraints carry no direction
// (board parallel to the image plane) and IllConditioned when the elimination
// is too close to that degeneracy to trust.
ImageLine principal_line_from_homography(const Eigen::Matrix3d& h);

// Least-squares intersection: argmin over p of sum_i w_i * dist(line_i, p)^2
// via the 2x2 normal equations. ids name the lines in the result (defaults to
// input indices). weights, when given, must be positive and one per line —
// useful for down-weighting lines from poorly fitting homographies; empty
// means unweighted, which is the default everywhere in this library. Throws
// TooFewLines (< 2) and NearParallelLines when the bundle's direction spread
// is below min_separation_deg (measured as the conditioning of the normal
// matrix).
PrincipalPointEstimate principal_point_from_lines(const std::vector<ImageLine>& lines,
                                                  const std::vector<std::string>& ids = {},
                                                  double min_separation_deg = 1.0,
                                                  const std::vector<double>& weights = {});

struct OutlierRejection {
  std::vector<ImageLine> kept;
  std::vector<std::string> kept_ids;
  std::vector<std::string> removed_ids;
  PrincipalPointEstimate estimate;  // fit over the kept lines
};

// Deterministic greedy trimming, no randomness involved: fit, drop the single
// worst line if its distance exceeds the threshold, refit; stop when all lines
// fit, rounds are exhausted, or only two lines remain. Throws TooFewLines (< 3).
OutlierRejection reject_outlier_lines(const std::vector<ImageLine>& lines,
                                      const std::vector<std::string>& ids = {},
                                      int max_rounds = 8,
                                      double distance_threshold_px = 25.0,
                                      double min_separation_deg = 1.0);

// angle = acute angle between the lines; offset = |a*x_ref + b*y_ref + c|.
DeflectionMeasure line_deflection(const ImageLine& line, const ImageLine& reference_line,
                                  const Eigen::Vector2d& reference_point);

// Same least-squares intersection applied to the flattened pair lines; the
// pair structure is recorded in lines_used as "<pair_id>/a" and "<pair_id>/b".
// A single pair consists of two near-parallel lines, so it fails with
// NearParallelLines just like any direction-deficient bundle.
PrincipalPointEstimate principal_point_from_pairs(
    const std::vector<std::pair<ImageLine, ImageLine>>& pairs,
    const std::vector<std::string>& pair_ids = {},
    double min_separation_deg = 1.0);

}  // namespace plcalib
