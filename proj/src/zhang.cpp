#include "plcalib/zhang.hpp"

#include <cmath>

#include "plcalib/errors.hpp"
#include "plcalib/homography.hpp"
#include "plcalib/numeric.hpp"

namespace plcalib {

namespace {

// One view's orthonormality constraints as rows [A B C D] * (u0, v0, w, 1)' = 0,
// the same linearization the principal-line construction eliminates w from.
Eigen::Matrix<double, 2, 4> conic_rows(const Eigen::Matrix3d& h) {
  const double h11 = h(0, 0), h12 = h(0, 1);
  const double h21 = h(1, 0), h22 = h(1, 1);
  const double h31 = h(2, 0), h32 = h(2, 1);
  Eigen::Matrix<double, 2, 4> rows;
  rows << -(h11 * h32 + h31 * h12), -(h21 * h32 + h31 * h22), h31 * h32,
      h11 * h12 + h21 * h22,
      -2.0 * (h11 * h31 - h12 * h32), -2.0 * (h21 * h31 - h22 * h32),
      h31 * h31 - h32 * h32, h11 * h11 + h21 * h21 - h12 * h12 - h22 * h22;
  return rows;
}

Eigen::Vector2d ideal_projection(const CameraIntrinsics& cam, const BoardPose& pose,
                                 const Eigen::Vector2d& board_point) {
  return project(cam, RadialDistortion{0.0, 0.0}, pose, board_point);
}

// Pixel-level undistortion about the current principal point.
Eigen::Vector2d undistort_pixel(const CameraIntrinsics& cam, const RadialDistortion& dist,
                                const Eigen::Vector2d& pixel) {
  const Eigen::Vector2d normalized((pixel.x() - cam.u0) / cam.f, (pixel.y() - cam.v0) / cam.f);
  const Eigen::Vector2d corrected = undistort_normalized(dist, normalized);
  return {cam.f * corrected.x() + cam.u0, cam.f * corrected.y() + cam.v0};
}

struct ModelState {
  CameraIntrinsics intrinsics;
  RadialDistortion distortion{0.0, 0.0};
  std::vector<BoardPose> poses;
  double rms = 0.0;
};

ModelState estimate_once(const std::vector<ObservationSet>& raw,
                         const std::vector<ObservationSet>& working,
                         const ZhangOptions& options) {
  std::vector<Eigen::Matrix3d> hs;
  hs.reserve(working.size());
  for (const auto& obs : working) hs.push_back(estimate_homography(obs));

  ModelState state;
  state.intrinsics =
      intrinsics_from_homographies(hs, options.image_width, options.image_height);
  state.poses.reserve(hs.size());
  for (const auto& h : hs) state.poses.push_back(pose_from_homography(state.intrinsics, h));
  if (options.estimate_distortion) {
    state.distortion = fit_radial_distortion(state.intrinsics, raw, state.poses);
  }
  state.rms = reprojection_rms(state.intrinsics, state.distortion, raw, state.poses);
  return state;
}

// Rotation vector (angle * axis) packing for the refinement stage.
Eigen::Vector3d pack_rotation(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

Eigen::Matrix3d unpack_rotation(const Eigen::Vector3d& v) {
  const double angle = v.norm();
  if (angle < 1e-16) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

}  // namespace

CameraIntrinsics intrinsics_from_homographies(const std::vector<Eigen::Matrix3d>& hs,
                                              int image_width, int image_height) {
  if (hs.size() < 2) {
    throw DegenerateSet("intrinsics need at least 2 views");
  }
  Eigen::MatrixXd system(2 * hs.size(), 4);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    system.block<2, 4>(2 * static_cast<Eigen::Index>(i), 0) =
        conic_rows(normalize_homography(hs[i]));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // A one-dimensional nullspace is expected; a second near-zero singular value
  // means the views do not pin the conic down (e.g. all board planes parallel).
  if (sv(2) < 1e-9 * sv(0)) {
    throw DegenerateSet("views leave the absolute-conic system underdetermined");
  }
  const Eigen::Vector4d v = svd.matrixV().col(3);
  if (std::abs(v(3)) < 1e-12) {
    throw DegenerateSet("absolute-conic solution is at infinity");
  }
  const double u0 = v(0) / v(3);
  const double v0 = v(1) / v(3);
  const double w = v(2) / v(3);
  const double f_sq = w - u0 * u0 - v0 * v0;
  if (!(f_sq > 0.0)) {
    throw Diverged("absolute-conic solve produced a nonpositive squared focal length");
  }
  try {
    return make_intrinsics(std::sqrt(f_sq), u0, v0, image_width, image_height);
  } catch (const Error& e) {
    throw Diverged(std::string("estimated intrinsics are invalid: ") + e.what());
  }
}

BoardPose pose_from_homography(const CameraIntrinsics& cam, const Eigen::Matrix3d& h) {
  const Eigen::Matrix3d k_inv = intrinsic_matrix(cam).inverse();
  Eigen::Vector3d r1 = k_inv * h.col(0);
  Eigen::Vector3d r2 = k_inv * h.col(1);
  Eigen::Vector3d t = k_inv * h.col(2);
  const double scale_norm = r1.norm();
  if (scale_norm < 1e-15) {
    throw Diverged("homography column collapses under the intrinsics");
  }
  const double lambda = 1.0 / scale_norm;
  r1 *= lambda;
  r2 *= lambda;
  t *= lambda;
  if (t.z() < 0.0) {  // sign of the nullspace vector is arbitrary; board is in front
    r1 = -r1;
    r2 = -r2;
    t = -t;
  }
  if (t.z() <= 0.0) {
    throw Diverged("board plane passes through the camera center");
  }

  Eigen::Matrix3d r_approx;
  r_approx.col(0) = r1;
  r_approx.col(1) = r2;
  r_approx.col(2) = r1.cross(r2);
  // Nearest rotation in Frobenius norm.
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(r_approx,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d rotation = svd.matrixU() * svd.matrixV().transpose();
  if (rotation.determinant() < 0.0) {
    rotation = svd.matrixU() * Eigen::Vector3d(1, 1, -1).asDiagonal() *
               svd.matrixV().transpose();
  }
  try {
    return make_pose(rotation, t);
  } catch (const Error& e) {
    throw Diverged(std::string("extracted pose is invalid: ") + e.what());
  }
}

RadialDistortion fit_radial_distortion(const CameraIntrinsics& cam,
                                       const std::vector<ObservationSet>& observations,
                                       const std::vector<BoardPose>& poses) {
  if (observations.size() != poses.size()) {
    throw Error("observation and pose counts disagree");
  }
  std::size_t total = 0;
  for (const auto& obs : observations) total += obs.correspondences.size();

  Eigen::MatrixXd a(2 * total, 2);
  Eigen::VectorXd b(2 * total);
  std::size_t row = 0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    for (const auto& c : observations[i].correspondences) {
      const Eigen::Vector2d ideal = ideal_projection(cam, poses[i], c.board);
      const double du = ideal.x() - cam.u0;
      const double dv = ideal.y() - cam.v0;
      const double r2 = (du * du + dv * dv) / (cam.f * cam.f);
      a.row(row) << du * r2, du * r2 * r2;
      b(row) = c.pixel.x() - ideal.x();
      ++row;
      a.row(row) << dv * r2, dv * r2 * r2;
      b(row) = c.pixel.y() - ideal.y();
      ++row;
    }
  }
  const Eigen::VectorXd k = solve_least_squares(a, b).solution;
  return RadialDistortion{k(0), k(1)};
}

double reprojection_rms(const CameraIntrinsics& cam, const RadialDistortion& dist,
                        const std::vector<ObservationSet>& observations,
                        const std::vector<BoardPose>& poses) {
  if (observations.size() != poses.size()) {
    throw Error("observation and pose counts disagree");
  }
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    for (const auto& c : observations[i].correspondences) {
      sum_sq += (project(cam, dist, poses[i], c.board) - c.pixel).squaredNorm();
      ++count;
    }
  }
  return count == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(count));
}

CalibrationResult calibrate_zhang(const std::vector<ObservationSet>& observations,
                                  const ZhangOptions& options) {
  if (observations.size() < 3) {
    throw DegenerateSet("calibration needs at least 3 views");
  }

  ModelState best = estimate_once(observations, observations, options);
  int iterations = 0;

  // Alternate: undistort the observations under the current model, re-run the
  // closed form, re-fit the distortion against the raw pixels. Accept a round
  // only while the raw-pixel rms decreases; a worsening round is rolled back,
  // which keeps the reported rms monotonically non-increasing.
  if (options.estimate_distortion) {
    for (int round = 0; round < options.max_alternation_rounds; ++round) {
      std::vector<ObservationSet> working = observations;
      for (auto& obs : working) {
        for (auto& c : obs.correspondences) {
          c.pixel = undistort_pixel(best.intrinsics, best.distortion, c.pixel);
        }
      }
      const ModelState candidate = estimate_once(observations, working, options);
      if (candidate.rms < best.rms) {
        const bool converged = best.rms - candidate.rms < options.rms_tolerance;
        best = candidate;
        ++iterations;
        if (converged) break;
      } else {
        break;
      }
    }
  }

  if (options.refine) {
    // Joint Gauss-Newton over (f, u0, v0, k1, k2) and each pose's rotation
    // vector + translation, minimizing all corner reprojection residuals.
    const std::size_t n_views = observations.size();
    Eigen::VectorXd x(5 + 6 * n_views);
    x(0) = best.intrinsics.f;
    x(1) = best.intrinsics.u0;
    x(2) = best.intrinsics.v0;
    x(3) = best.distortion.k1;
    x(4) = best.distortion.k2;
    for (std::size_t i = 0; i < n_views; ++i) {
      x.segment<3>(5 + 6 * i) = pack_rotation(best.poses[i].rotation);
      x.segment<3>(5 + 6 * i + 3) = best.poses[i].translation;
    }

    std::size_t total = 0;
    for (const auto& obs : observations) total += obs.correspondences.size();

    const ResidualFn residual = [&](const Eigen::VectorXd& p) {
      const CameraIntrinsics cam{p(0), p(1), p(2), options.image_width, options.image_height};
      const RadialDistortion dist{p(3), p(4)};
      Eigen::VectorXd r(2 * total);
      std::size_t row = 0;
      for (std::size_t i = 0; i < n_views; ++i) {
        const BoardPose pose{unpack_rotation(p.segment<3>(5 + 6 * i)),
                             p.segment<3>(5 + 6 * i + 3)};
        for (const auto& c : observations[i].correspondences) {
          const Eigen::Vector2d proj = project(cam, dist, pose, c.board);
          r(row++) = proj.x() - c.pixel.x();
          r(row++) = proj.y() - c.pixel.y();
        }
      }
      return r;
    };
    const JacobianFn jacobian = [&](const Eigen::VectorXd& p) {
      return numeric_jacobian(residual, p);
    };

    // Step one iteration at a time so a bottomed-out optimizer (step halving
    // cannot decrease the objective any further, which at the noise floor is
    // the expected stopping state, reported as Diverged) keeps the progress
    // made up to that point instead of discarding the refinement entirely.
    for (int it = 0; it < 30; ++it) {
      GaussNewtonInfo info;
      Eigen::VectorXd next;
      try {
        next = gauss_newton(residual, jacobian, x, 1, 1e-10, &info);
      } catch (const Diverged&) {
        break;
      }
      x = next;
      iterations += info.iterations;
      if (info.converged) break;
    }

    try {
      best.intrinsics =
          make_intrinsics(x(0), x(1), x(2), options.image_width, options.image_height);
    } catch (const Error& e) {
      throw Diverged(std::string("refined intrinsics are invalid: ") + e.what());
    }
    best.distortion = RadialDistortion{x(3), x(4)};
    for (std::size_t i = 0; i < n_views; ++i) {
      try {
        best.poses[i] =
            make_pose(unpack_rotation(x.segment<3>(5 + 6 * i)), x.segment<3>(5 + 6 * i + 3));
      } catch (const Error& e) {
        throw Diverged(std::string("refined pose is invalid: ") + e.what());
      }
    }
    best.rms = reprojection_rms(best.intrinsics, best.distortion, observations, best.poses);
  }

  CalibrationResult result;
  result.intrinsics = best.intrinsics;
  result.distortion = best.distortion;
  result.per_pose = best.poses;
  result.rms_reprojection = best.rms;
  result.iterations = iterations;
  return result;
}

Eigen::Vector2d baseline_pp_for_subset(const std::vector<ObservationSet>& observations,
                                       const std::vector<int>& subset,
                                       const ZhangOptions& options) {
  if (subset.size() < 3) {
    throw DegenerateSet("subset calibration needs at least 3 views");
  }
  std::vector<ObservationSet> selected;
  selected.reserve(subset.size());
  for (const int idx : subset) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= observations.size()) {
      throw Error("subset index out of range");
    }
    selected.push_back(observations[idx]);
  }
  const CalibrationResult result = calibrate_zhang(selected, options);
  return {result.intrinsics.u0, result.intrinsics.v0};
}

}  // namespace plcalib
