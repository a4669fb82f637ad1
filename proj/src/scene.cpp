#include "plcalib/scene.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "plcalib/errors.hpp"
#include "plcalib/rng.hpp"

namespace plcalib {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Eigen::Matrix3d rotation_x(double deg) {
  return Eigen::AngleAxisd(deg * kDegToRad, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

Eigen::Matrix3d rotation_z(double deg) {
  return Eigen::AngleAxisd(deg * kDegToRad, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

std::string alpha_pose_id(const std::string& base, double alpha_deg) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s_a%g", base.c_str(), alpha_deg);
  return buf;
}

}  // namespace

Checkerboard make_checkerboard(int inner_rows, int inner_cols, double square_size) {
  if (inner_rows < 3 || inner_cols < 3) {
    throw InvalidDimensions("checkerboard needs at least 3x3 inner corners");
  }
  if (!(square_size > 0.0)) {
    throw InvalidDimensions("checkerboard square size must be positive");
  }
  return Checkerboard{inner_rows, inner_cols, square_size};
}

std::vector<Eigen::Vector2d> board_corners(const Checkerboard& board) {
  std::vector<Eigen::Vector2d> corners;
  corners.reserve(static_cast<std::size_t>(board.inner_rows) * board.inner_cols);
  const double half_cols = (board.inner_cols - 1) / 2.0;
  const double half_rows = (board.inner_rows - 1) / 2.0;
  for (int i = 0; i < board.inner_rows; ++i) {
    for (int j = 0; j < board.inner_cols; ++j) {
      corners.emplace_back((j - half_cols) * board.square_size,
                           (i - half_rows) * board.square_size);
    }
  }
  return corners;
}

BoardPose realize_pose(const PoseRecipe& recipe) {
  if (!(recipe.dihedral_deg > 0.0 && recipe.dihedral_deg < 90.0)) {
    throw Error("dihedral angle must lie strictly between 0 and 90 degrees");
  }
  if (!(recipe.depth > 0.0)) {
    throw Error("pose depth must be positive");
  }
  const Eigen::Matrix3d spin = rotation_z(recipe.alpha_deg);
  const Eigen::Matrix3d rotation = spin * rotation_x(recipe.dihedral_deg);
  // The board center starts at `translation` in the x-y plane and is carried
  // around the rotation axis; only the axis point itself stays fixed.
  const Eigen::Vector3d arm(recipe.translation.x() - recipe.rotation_center.x(),
                            recipe.translation.y() - recipe.rotation_center.y(), 0.0);
  const Eigen::Vector3d translation =
      spin * arm + Eigen::Vector3d(recipe.rotation_center.x(), recipe.rotation_center.y(),
                                   recipe.depth);
  return make_pose(rotation, translation);
}

std::vector<PoseRecipe> pose_ring(const PoseRecipe& base, int count, double delta_alpha_deg) {
  if (count < 2) {
    throw Error("a pose ring needs at least 2 poses");
  }
  std::vector<PoseRecipe> ring;
  ring.reserve(count);
  for (int k = 0; k < count; ++k) {
    PoseRecipe recipe = base;
    recipe.alpha_deg = base.alpha_deg + k * delta_alpha_deg;
    recipe.pose_id = alpha_pose_id(base.pose_id, recipe.alpha_deg);
    ring.push_back(std::move(recipe));
  }
  return ring;
}

std::vector<std::pair<PoseRecipe, PoseRecipe>> paired_poses(const std::vector<double>& alphas,
                                                            const PoseRecipe& base) {
  std::vector<std::pair<PoseRecipe, PoseRecipe>> pairs;
  pairs.reserve(alphas.size());
  for (const double alpha : alphas) {
    PoseRecipe first = base;
    first.alpha_deg = alpha;
    first.pose_id = alpha_pose_id(base.pose_id, alpha);
    PoseRecipe second = base;
    second.alpha_deg = alpha + 180.0;
    second.pose_id = alpha_pose_id(base.pose_id, alpha + 180.0);
    pairs.emplace_back(std::move(first), std::move(second));
  }
  return pairs;
}

std::vector<std::vector<int>> skip_sets(int count, int n) {
  if (n < 0 || n > count - 3) {
    throw TooFewRemaining("skip width must leave at least 3 poses in the ring");
  }
  if (n == 0) {
    std::vector<int> all(count);
    for (int i = 0; i < count; ++i) all[i] = i;
    return {all};
  }
  std::vector<std::vector<int>> subsets;
  subsets.reserve(count);
  for (int start = 0; start < count; ++start) {
    std::vector<bool> skipped(count, false);
    for (int k = 0; k < n; ++k) skipped[(start + k) % count] = true;
    std::vector<int> subset;
    subset.reserve(count - n);
    for (int i = 0; i < count; ++i) {
      if (!skipped[i]) subset.push_back(i);
    }
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

ObservationSet render_corners(const CameraIntrinsics& cam, const RadialDistortion& dist,
                              const PoseRecipe& recipe, const Checkerboard& board,
                              double noise_sigma, std::uint64_t seed) {
  ObservationSet set;
  set.pose_id = recipe.pose_id;
  set.noise_sigma = noise_sigma;
  set.seed = seed;

  const BoardPose pose = realize_pose(recipe);
  const std::vector<Eigen::Vector2d> corners = board_corners(board);
  set.correspondences.reserve(corners.size());

  Rng rng(derive_seed(seed, recipe.pose_id));
  for (std::size_t idx = 0; idx < corners.size(); ++idx) {
    Eigen::Vector2d pixel = project(cam, dist, pose, corners[idx]);
    if (noise_sigma > 0.0) {
      pixel.x() += rng.gaussian(0.0, noise_sigma);
      pixel.y() += rng.gaussian(0.0, noise_sigma);
    }
    if (pixel.x() < 0.0 || pixel.x() >= cam.image_width || pixel.y() < 0.0 ||
        pixel.y() >= cam.image_height) {
      set.out_of_frame.push_back(static_cast<int>(idx));
    }
    set.correspondences.push_back({corners[idx], pixel});
  }
  return set;
}

}  // namespace plcalib
