#pragma once

#include <Eigen/Dense>

#include "plcalib/image_line.hpp"

namespace plcalib {

// Pinhole intrinsics with zero skew and unit aspect ratio: the whole toolkit
// works in this restricted model, so a single focal length suffices.
struct CameraIntrinsics {
  double f = 0.0;            // focal length in pixels
  double u0 = 0.0;           // principal point, pixels
  double v0 = 0.0;
  int image_width = 0;       // sensor size in pixels
  int image_height = 0;
};

// Validates f > 0 and principal point inside the image.
CameraIntrinsics make_intrinsics(double f, double u0, double v0,
                                 int image_width, int image_height);

Eigen::Matrix3d intrinsic_matrix(const CameraIntrinsics& cam);

// Two-term even radial distortion on normalized coordinates:
// p_d = p * (1 + k1 r^2 + k2 r^4).
struct RadialDistortion {
  double k1 = 0.0;
  double k2 = 0.0;
};

// Largest normalized radius the camera can see: the farthest image corner
// from the principal point, divided by the focal length.
double working_radius(const CameraIntrinsics& cam);

// Validates that the distortion factor 1 + k1 r^2 + k2 r^4 stays positive for
// all r in [0, max_radius]; a sign change there would fold the image and make
// the forward model non-invertible. Throws Error on violation.
RadialDistortion make_distortion(double k1, double k2, double max_radius);

// Rigid pose of the board plane in the camera frame; board points are
// (x, y, 0) in board coordinates.
struct BoardPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

// Validates orthonormality and det = +1 within 1e-10, and positive depth of
// the board center (the translation's z).
BoardPose make_pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

Eigen::Vector2d distort_normalized(const RadialDistortion& dist, const Eigen::Vector2d& p);

// Newton inversion of distort_normalized; the result re-distorts to p_d
// within 1e-10. Throws NoConvergence after 50 iterations.
Eigen::Vector2d undistort_normalized(const RadialDistortion& dist, const Eigen::Vector2d& p_d);

// Projects a camera-frame point: normalize by depth, distort, map to pixels.
// Throws BehindCamera when z <= 0.
Eigen::Vector2d project_camera_point(const CameraIntrinsics& cam, const RadialDistortion& dist,
                                     const Eigen::Vector3d& x_cam);

// Projects a board-plane point through the pose and the camera.
Eigen::Vector2d project(const CameraIntrinsics& cam, const RadialDistortion& dist,
                        const BoardPose& pose, const Eigen::Vector2d& board_point);

// The oracle line: passes through the principal point with direction given by
// the (x, y) part of the board normal. Computed from the pose alone, so it is
// independent of every estimation path in this library. Throws
// DegenerateFrontalPose when the board is parallel to the image plane.
ImageLine ground_truth_principal_line(const CameraIntrinsics& cam, const BoardPose& pose);

}  // namespace plcalib
