#pragma once

#include <Eigen/Dense>
#include <vector>

#include "plcalib/camera.hpp"
#include "plcalib/scene.hpp"

namespace plcalib {

struct CalibrationResult {
  CameraIntrinsics intrinsics;
  RadialDistortion distortion;
  std::vector<BoardPose> per_pose;   // one pose per input observation set
  double rms_reprojection = 0.0;     // pixels, over all corners of all views
  int iterations = 0;                // accepted alternation rounds + refinement steps
};

struct ZhangOptions {
  bool refine = true;                // joint Gauss-Newton over all parameters
  bool estimate_distortion = true;
  int max_alternation_rounds = 20;
  double rms_tolerance = 1e-6;       // stop when a round improves rms by less
  // Needed only to validate that the estimated principal point stays inside
  // the image; matches the camera that produced the observations.
  int image_width = 1920;
  int image_height = 1080;
};

// Closed-form restricted absolute-conic solve: with zero skew and unit aspect
// the per-view orthonormality constraints are linear in (u0, v0, w, 1) with
// w = f^2 + u0^2 + v0^2, so the stacked 2m x 4 system's nullspace yields the
// intrinsics directly. Throws DegenerateSet (< 2 views, or views that leave
// the system with a nullspace of dimension > 1, e.g. all planes parallel) and
// Diverged when the recovered f^2 is nonpositive.
CameraIntrinsics intrinsics_from_homographies(const std::vector<Eigen::Matrix3d>& hs,
                                              int image_width, int image_height);

// Pose from H = K [r1 r2 t]: scale by 1/|K^-1 h1|, pick the sign putting the
// board in front of the camera, complete r3 = r1 x r2 and re-orthonormalize
// through the SVD. Throws Diverged when no valid pose exists.
BoardPose pose_from_homography(const CameraIntrinsics& cam, const Eigen::Matrix3d& h);

// Linear least-squares (k1, k2) from the radial displacement between observed
// pixels and the distortion-free projections under the current intrinsics.
RadialDistortion fit_radial_distortion(const CameraIntrinsics& cam,
                                       const std::vector<ObservationSet>& observations,
                                       const std::vector<BoardPose>& poses);

double reprojection_rms(const CameraIntrinsics& cam, const RadialDistortion& dist,
                        const std::vector<ObservationSet>& observations,
                        const std::vector<BoardPose>& poses);

// Full baseline: closed-form intrinsics, pose extraction, linear distortion,
// alternation between the two (undistort, re-estimate) until the rms stops
// improving, then optional joint Gauss-Newton refinement of every parameter.
// The reported rms never increases across alternation rounds: a round that
// would increase it is rolled back and the alternation stops.
// Throws DegenerateSet (< 3 views or degenerate geometry) and Diverged.
CalibrationResult calibrate_zhang(const std::vector<ObservationSet>& observations,
                                  const ZhangOptions& options = {});

// Convenience for the skip-n protocol: calibrate on the selected views only
// and return just the principal point.
Eigen::Vector2d baseline_pp_for_subset(const std::vector<ObservationSet>& observations,
                                       const std::vector<int>& subset,
                                       const ZhangOptions& options = {});

}  // namespace plcalib
