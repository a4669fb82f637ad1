#pragma once

#include <Eigen/Dense>

#include "plcalib/scene.hpp"

namespace plcalib {

// Scale-fixes a homography: Frobenius norm 1, largest-magnitude entry positive.
// Every estimate in this library carries this normalization so matrices are
// comparable across runs and reports stay byte-stable.
Eigen::Matrix3d normalize_homography(Eigen::Matrix3d h);

// Hartley-normalized DLT: both point sets are shifted to centroid zero and
// scaled to mean distance sqrt(2), the 2Nx9 system's nullspace direction is
// taken, and the result is de-normalized. Algebraic only — no nonlinear
// polish, since downstream consumers study the (mild) estimation bias itself.
// Throws TooFewPoints (< 4 correspondences) or DegenerateConfiguration.
Eigen::Matrix3d estimate_homography(const ObservationSet& obs);

struct ReprojectionStats {
  double rms = 0.0;  // pixels
  double max = 0.0;  // pixels
};

ReprojectionStats reprojection_error(const Eigen::Matrix3d& h, const ObservationSet& obs);

}  // namespace plcalib
