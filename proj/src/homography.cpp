#include "plcalib/homography.hpp"

#include <cmath>

#include "plcalib/errors.hpp"
#include "plcalib/numeric.hpp"

namespace plcalib {

namespace {

// Similarity transform taking the points to centroid zero, mean distance sqrt(2).
Eigen::Matrix3d hartley_transform(const std::vector<Eigen::Vector2d>& points) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  double mean_dist = 0.0;
  for (const auto& p : points) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(points.size());
  if (mean_dist <= 0.0) {
    throw DegenerateConfiguration("all correspondence points coincide");
  }

  const double scale = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = scale;
  t(1, 1) = scale;
  t(0, 2) = -scale * centroid.x();
  t(1, 2) = -scale * centroid.y();
  return t;
}

Eigen::Vector2d apply_h(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = h * Eigen::Vector3d(p.x(), p.y(), 1.0);
  return {q.x() / q.z(), q.y() / q.z()};
}

}  // namespace

Eigen::Matrix3d normalize_homography(Eigen::Matrix3d h) {
  const double norm = h.norm();
  if (!(norm > 0.0)) {
    throw DegenerateConfiguration("homography is the zero matrix");
  }
  h /= norm;
  Eigen::Index row = 0, col = 0;
  h.cwiseAbs().maxCoeff(&row, &col);
  if (h(row, col) < 0.0) h = -h;
  return h;
}

Eigen::Matrix3d estimate_homography(const ObservationSet& obs) {
  const auto& corr = obs.correspondences;
  if (corr.size() < 4) {
    throw TooFewPoints("homography estimation needs at least 4 correspondences");
  }

  std::vector<Eigen::Vector2d> src, dst;
  src.reserve(corr.size());
  dst.reserve(corr.size());
  for (const auto& c : corr) {
    src.push_back(c.board);
    dst.push_back(c.pixel);
  }
  const Eigen::Matrix3d t_src = hartley_transform(src);
  const Eigen::Matrix3d t_dst = hartley_transform(dst);

  Eigen::MatrixXd a(2 * corr.size(), 9);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Eigen::Vector2d p = apply_h(t_src, src[i]);
    const Eigen::Vector2d q = apply_h(t_dst, dst[i]);
    const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Uniqueness guard: a configuration that admits a whole family of solutions
  // (collinear board points, say) shows up as a second near-zero singular
  // value. The recovered H itself can look perfectly regular in such cases,
  // so the check has to happen on the constraint spectrum.
  if (sv(7) < 1e-8 * sv(0)) {
    throw DegenerateConfiguration("correspondences do not determine a unique homography");
  }
  const Eigen::VectorXd h_vec = svd.matrixV().col(8);
  Eigen::Matrix3d h_norm;
  h_norm << h_vec(0), h_vec(1), h_vec(2), h_vec(3), h_vec(4), h_vec(5), h_vec(6), h_vec(7),
      h_vec(8);

  const Eigen::Matrix3d h = t_dst.inverse() * h_norm * t_src;

  // Rank guard: a solution that collapses the image plane is no projectivity
  // even when it is unique.
  const Eigen::JacobiSVD<Eigen::Matrix3d> rank_check(h);
  if (rank_check.singularValues()(2) < 1e-10 * rank_check.singularValues()(0)) {
    throw DegenerateConfiguration("estimated homography is rank deficient");
  }
  return normalize_homography(h);
}

ReprojectionStats reprojection_error(const Eigen::Matrix3d& h, const ObservationSet& obs) {
  ReprojectionStats stats;
  if (obs.correspondences.empty()) return stats;
  double sum_sq = 0.0;
  for (const auto& c : obs.correspondences) {
    const double err = (apply_h(h, c.board) - c.pixel).norm();
    sum_sq += err * err;
    stats.max = std::max(stats.max, err);
  }
  stats.rms = std::sqrt(sum_sq / static_cast<double>(obs.correspondences.size()));
  return stats;
}

}  // namespace plcalib
