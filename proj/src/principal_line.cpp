#include "plcalib/principal_line.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {

std::vector<std::string> default_ids(std::size_t n, const std::vector<std::string>& given) {
  if (!given.empty()) {
    if (given.size() != n) throw Error("line identifier count does not match line count");
    return given;
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

// Conditioning bound for the 2x2 normal matrix: two unit normals separated by
// an angle theta give eigenvalue ratio tan^2(theta/2), so this is the natural
// translation of a minimum-separation angle into a condition threshold.
double separation_ratio(double min_separation_deg) {
  const double half = 0.5 * min_separation_deg * std::numbers::pi / 180.0;
  const double t = std::tan(half);
  return t * t;
}

}  // namespace

ImageLine principal_line_from_homography(const Eigen::Matrix3d& h) {
  const double h11 = h(0, 0), h12 = h(0, 1);
  const double h21 = h(1, 0), h22 = h(1, 1);
  const double h31 = h(2, 0), h32 = h(2, 1);

  // Orthonormality constraints as rows [A B C D] * (u0, v0, w, 1)' = 0.
  const double a1 = -(h11 * h32 + h31 * h12);
  const double b1 = -(h21 * h32 + h31 * h22);
  const double c1 = h31 * h32;
  const double d1 = h11 * h12 + h21 * h22;

  const double a2 = -2.0 * (h11 * h31 - h12 * h32);
  const double b2 = -2.0 * (h21 * h31 - h22 * h32);
  const double c2 = h31 * h31 - h32 * h32;
  const double d2 = h11 * h11 + h21 * h21 - h12 * h12 - h22 * h22;

  // Eliminate w between the two rows; what is left is the line in (u0, v0).
  const double a = a1 * c2 - a2 * c1;
  const double b = b1 * c2 - b2 * c1;
  const double c = d1 * c2 - d2 * c1;

  // The elimination is c2*row1 - c1*row2, so the natural size of its (u0, v0)
  // part is |(c1, c2)| times the rows' own direction norms. Comparing against
  // that (rather than raw row magnitudes, which the d-terms dominate) makes the
  // guard scale-free in both the homography and the pose geometry.
  const double direction = std::hypot(a, b);
  const double scale =
      std::hypot(c1, c2) * std::max(std::hypot(a1, b1), std::hypot(a2, b2));
  if (scale == 0.0 || direction <= 1e-12 * scale) {
    throw DegenerateFrontalPose(
        "homography constraints carry no principal-line direction (frontal board)");
  }
  if (direction <= 1e-9 * scale) {
    throw IllConditioned("principal-line elimination is too close to degenerate");
  }
  return make_line(a, b, c);
}

PrincipalPointEstimate principal_point_from_lines(const std::vector<ImageLine>& lines,
                                                  const std::vector<std::string>& ids,
                                                  double min_separation_deg,
                                                  const std::vector<double>& weights) {
  if (lines.size() < 2) {
    throw TooFewLines("principal-point estimation needs at least 2 lines");
  }
  const std::vector<std::string> used = default_ids(lines.size(), ids);
  if (!weights.empty()) {
    if (weights.size() != lines.size()) {
      throw Error("weight count does not match line count");
    }
    for (double w : weights) {
      if (!(w > 0.0)) throw Error("line weights must be positive");
    }
  }

  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const Eigen::Vector2d normal(lines[i].a, lines[i].b);
    m += w * normal * normal.transpose();
    rhs -= w * lines[i].c * normal;
  }

  // Closed-form eigenvalues of the symmetric 2x2 normal matrix.
  const double tr = m.trace();
  const double det = m.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lam_max = 0.5 * (tr + disc);
  const double lam_min = 0.5 * (tr - disc);
  if (!(lam_min > separation_ratio(min_separation_deg) * lam_max)) {
    throw NearParallelLines("line directions are too close to parallel to intersect");
  }

  PrincipalPointEstimate est;
  est.pp = m.ldlt().solve(rhs);
  est.lines_used = used;
  est.per_line_distance.reserve(lines.size());
  double sum_sq = 0.0;
  for (const auto& line : lines) {
    const double d = std::abs(signed_distance(line, est.pp));
    est.per_line_distance.push_back(d);
    sum_sq += d * d;
  }
  est.rms_distance = std::sqrt(sum_sq / static_cast<double>(lines.size()));
  return est;
}

OutlierRejection reject_outlier_lines(const std::vector<ImageLine>& lines,
                                      const std::vector<std::string>& ids, int max_rounds,
                                      double distance_threshold_px,
                                      double min_separation_deg) {
  if (lines.size() < 3) {
    throw TooFewLines("outlier rejection needs at least 3 lines");
  }
  OutlierRejection result;
  result.kept = lines;
  result.kept_ids = default_ids(lines.size(), ids);

  int rounds = 0;
  while (true) {
    result.estimate =
        principal_point_from_lines(result.kept, result.kept_ids, min_separation_deg);
    const auto worst = std::max_element(result.estimate.per_line_distance.begin(),
                                        result.estimate.per_line_distance.end());
    const bool all_within = *worst <= distance_threshold_px;
    if (all_within || rounds >= max_rounds || result.kept.size() <= 2) break;
    const auto idx = static_cast<std::size_t>(
        std::distance(result.estimate.per_line_distance.begin(), worst));
    result.removed_ids.push_back(result.kept_ids[idx]);
    result.kept.erase(result.kept.begin() + idx);
    result.kept_ids.erase(result.kept_ids.begin() + idx);
    ++rounds;
  }
  return result;
}

DeflectionMeasure line_deflection(const ImageLine& line, const ImageLine& reference_line,
                                  const Eigen::Vector2d& reference_point) {
  DeflectionMeasure measure;
  measure.angle_deg = line_angle_deg(line, reference_line);
  measure.offset_px = std::abs(signed_distance(line, reference_point));
  return measure;
}

PrincipalPointEstimate principal_point_from_pairs(
    const std::vector<std::pair<ImageLine, ImageLine>>& pairs,
    const std::vector<std::string>& pair_ids, double min_separation_deg) {
  if (pairs.empty()) {
    throw TooFewLines("pair intersection needs at least one pair of lines");
  }
  std::vector<std::string> names;
  if (!pair_ids.empty()) {
    if (pair_ids.size() != pairs.size()) {
      throw Error("pair identifier count does not match pair count");
    }
    names = pair_ids;
  } else {
    names.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) names.push_back("pair" + std::to_string(i));
  }

  std::vector<ImageLine> flat;
  std::vector<std::string> flat_ids;
  flat.reserve(2 * pairs.size());
  flat_ids.reserve(2 * pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    flat.push_back(pairs[i].first);
    flat_ids.push_back(names[i] + "/a");
    flat.push_back(pairs[i].second);
    flat_ids.push_back(names[i] + "/b");
  }
  return principal_point_from_lines(flat, flat_ids, min_separation_deg);
}

}  // namespace plcalib
