#include "plcalib/camera.hpp"

#include <cmath>

#include "plcalib/errors.hpp"

namespace plcalib {

CameraIntrinsics make_intrinsics(double f, double u0, double v0,
                                 int image_width, int image_height) {
  if (f <= 0.0) throw Error("focal length must be positive");
  if (image_width <= 0 || image_height <= 0) throw Error("image size must be positive");
  if (u0 < 0.0 || u0 >= image_width || v0 < 0.0 || v0 >= image_height) {
    throw Error("principal point must lie inside the image");
  }
  return CameraIntrinsics{f, u0, v0, image_width, image_height};
}

Eigen::Matrix3d intrinsic_matrix(const CameraIntrinsics& cam) {
  Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
  k(0, 0) = cam.f;
  k(1, 1) = cam.f;
  k(0, 2) = cam.u0;
  k(1, 2) = cam.v0;
  return k;
}

double working_radius(const CameraIntrinsics& cam) {
  const double w = cam.image_width;
  const double h = cam.image_height;
  double r = 0.0;
  for (const double u : {0.0, w}) {
    for (const double v : {0.0, h}) {
      r = std::max(r, std::hypot(u - cam.u0, v - cam.v0));
    }
  }
  return r / cam.f;
}

RadialDistortion make_distortion(double k1, double k2, double max_radius) {
  if (max_radius < 0.0) throw Error("working radius must be nonnegative");
  // factor(s) = 1 + k1*s + k2*s^2 with s = r^2; check endpoints and the
  // interior vertex of the quadratic — the minimum is at one of these.
  const double smax = max_radius * max_radius;
  double lowest = std::min(1.0, 1.0 + k1 * smax + k2 * smax * smax);
  if (k2 != 0.0) {
    const double vertex = -k1 / (2.0 * k2);
    if (vertex > 0.0 && vertex < smax) {
      lowest = std::min(lowest, 1.0 + k1 * vertex + k2 * vertex * vertex);
    }
  }
  if (lowest <= 0.0) {
    throw Error("distortion factor becomes nonpositive inside the working radius");
  }
  return RadialDistortion{k1, k2};
}

BoardPose make_pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation) {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("pose rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > 1e-10) {
    throw Error("pose rotation must be proper (det = +1)");
  }
  if (translation.z() <= 0.0) {
    throw Error("board center must sit in front of the camera");
  }
  return BoardPose{rotation, translation};
}

Eigen::Vector2d distort_normalized(const RadialDistortion& dist, const Eigen::Vector2d& p) {
  const double r2 = p.squaredNorm();
  return p * (1.0 + dist.k1 * r2 + dist.k2 * r2 * r2);
}

Eigen::Vector2d undistort_normalized(const RadialDistortion& dist, const Eigen::Vector2d& p_d) {
  const double rd = p_d.norm();
  if (rd == 0.0) return Eigen::Vector2d::Zero();
  // Distortion is purely radial, so invert the scalar map r -> r*factor(r^2)
  // by Newton iteration and rescale the direction at the end.
  double r = rd;
  for (int iter = 0; iter < 50; ++iter) {
    const double r2 = r * r;
    const double factor = 1.0 + dist.k1 * r2 + dist.k2 * r2 * r2;
    const double value = r * factor - rd;
    if (std::abs(value) <= 1e-12 * std::max(1.0, rd)) {
      return p_d * (r / rd);
    }
    const double derivative = 1.0 + 3.0 * dist.k1 * r2 + 5.0 * dist.k2 * r2 * r2;
    if (derivative == 0.0) break;
    r -= value / derivative;
  }
  throw NoConvergence("undistort iteration did not converge within 50 steps");
}

Eigen::Vector2d project_camera_point(const CameraIntrinsics& cam, const RadialDistortion& dist,
                                     const Eigen::Vector3d& x_cam) {
  if (x_cam.z() <= 0.0) {
    throw BehindCamera("point has nonpositive depth");
  }
  const Eigen::Vector2d normalized(x_cam.x() / x_cam.z(), x_cam.y() / x_cam.z());
  const Eigen::Vector2d distorted = distort_normalized(dist, normalized);
  return {cam.f * distorted.x() + cam.u0, cam.f * distorted.y() + cam.v0};
}

Eigen::Vector2d project(const CameraIntrinsics& cam, const RadialDistortion& dist,
                        const BoardPose& pose, const Eigen::Vector2d& board_point) {
  const Eigen::Vector3d x_cam =
      pose.rotation * Eigen::Vector3d(board_point.x(), board_point.y(), 0.0) +
      pose.translation;
  return project_camera_point(cam, dist, x_cam);
}

ImageLine ground_truth_principal_line(const CameraIntrinsics& cam, const BoardPose& pose) {
  // Board normal in the camera frame; its image-plane part gives the line's
  // direction, and the line always passes through the principal point.
  const Eigen::Vector3d n = pose.rotation.col(2);
  if (std::abs(n.x()) + std::abs(n.y()) < 1e-9) {
    throw DegenerateFrontalPose("board is parallel to the image plane");
  }
  const double a = n.y();
  const double b = -n.x();
  return make_line(a, b, -(a * cam.u0 + b * cam.v0));
}

}  // namespace plcalib
