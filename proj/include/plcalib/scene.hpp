#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plcalib/camera.hpp"

namespace plcalib {

struct Checkerboard {
  int inner_rows = 0;
  int inner_cols = 0;
  double square_size = 0.0;  // world units
};

// Validates at least 3x3 inner corners and a positive square (InvalidDimensions).
Checkerboard make_checkerboard(int inner_rows, int inner_cols, double square_size);

// Inner corner (i, j) at ((j - (cols-1)/2)*s, (i - (rows-1)/2)*s), row-major:
// the grid is centered so the board origin coincides with its centroid.
std::vector<Eigen::Vector2d> board_corners(const Checkerboard& board);

// Recipe for one board placement in front of the camera.
struct PoseRecipe {
  double dihedral_deg = 45.0;  // tilt between board plane and image plane, (0, 90)
  double alpha_deg = 0.0;      // rotation about the axis parallel to the optical axis
  Eigen::Vector2d rotation_center = Eigen::Vector2d::Zero();  // where that axis sits, camera x-y
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();      // board-center offset, camera x-y
  double depth = 2600.0;       // board-center depth
  std::string pose_id = "pose";  // names the observation and its noise stream
};

// Realizes the recipe: tilt the board by the dihedral about the camera x-axis,
// move its center to `translation` in the camera x-y plane, rotate the whole
// arrangement by alpha about the axis through rotation_center, then push to
// depth. The alpha rotation carries the translated board around the axis:
// a ring of alphas is then exactly rotationally symmetric about that axis,
// and rotation_center == translation spins the board in place instead.
BoardPose realize_pose(const PoseRecipe& recipe);

struct Correspondence {
  Eigen::Vector2d board;  // board-plane coordinates (z = 0)
  Eigen::Vector2d pixel;  // observed image point
};

struct ObservationSet {
  std::string pose_id;
  std::vector<Correspondence> correspondences;
  double noise_sigma = 0.0;        // NaN when unknown (externally ingested corners)
  std::uint64_t seed = 0;          // master seed whose sub-stream produced the noise
  std::vector<int> out_of_frame;   // corner indices outside the image; a warning, not an error
};

// Ring of `count` recipes at alpha = base + k*delta, k = 0..count-1.
std::vector<PoseRecipe> pose_ring(const PoseRecipe& base, int count = 8,
                                  double delta_alpha_deg = 45.0);

// For each alpha, the (alpha, alpha + 180) recipe pair sharing every other field.
std::vector<std::pair<PoseRecipe, PoseRecipe>> paired_poses(const std::vector<double>& alphas,
                                                            const PoseRecipe& base);

// Cyclic skip subsets: for each start s in 0..count-1, the indices 0..count-1
// minus {s, .., s+n-1 (mod count)}, each subset sorted ascending. n = 0 yields
// the single full set. Throws TooFewRemaining when fewer than 3 poses remain.
std::vector<std::vector<int>> skip_sets(int count, int n);

// Projects every corner and adds independent per-coordinate Gaussian noise
// drawn from the sub-stream derive_seed(seed, recipe.pose_id), so rendering is
// deterministic for a fixed seed and independent of pose rendering order.
ObservationSet render_corners(const CameraIntrinsics& cam, const RadialDistortion& dist,
                              const PoseRecipe& recipe, const Checkerboard& board,
                              double noise_sigma, std::uint64_t seed);

}  // namespace plcalib
