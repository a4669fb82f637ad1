#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "plcalib/camera.hpp"
#include "plcalib/errors.hpp"
#include "plcalib/scene.hpp"
#include "test_fixtures.hpp"

using namespace plcalib;

namespace {

PoseRecipe named(PoseRecipe r, const std::string& id) {
  r.pose_id = id;
  return r;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("checkerboard validation") {
  CHECK_THROWS_AS(make_checkerboard(2, 5, 10.0), InvalidDimensions);
  CHECK_THROWS_AS(make_checkerboard(5, 2, 10.0), InvalidDimensions);
  CHECK_THROWS_AS(make_checkerboard(5, 5, 0.0), InvalidDimensions);
  CHECK_NOTHROW(make_checkerboard(3, 3, 1.0));
}

TEST_CASE("corner grid is centered and row-major") {
  const auto tiny = make_checkerboard(3, 3, 1.0);
  const auto pts = board_corners(tiny);
  REQUIRE(pts.size() == 9);
  CHECK(pts[0].isApprox(Eigen::Vector2d(-1, -1), 1e-15));
  CHECK(pts[4].norm() == 0.0);  // center corner of the middle row
  CHECK(pts[8].isApprox(Eigen::Vector2d(1, 1), 1e-15));

  const auto slab = make_checkerboard(3, 4, 2.0);
  const auto sp = board_corners(slab);
  REQUIRE(sp.size() == 12);
  CHECK(sp[0].isApprox(Eigen::Vector2d(-3, -2), 1e-15));
  CHECK(sp[11].isApprox(Eigen::Vector2d(3, 2), 1e-15));

  const auto board = fixtures::board();
  const auto bp = board_corners(board);
  REQUIRE(bp.size() == 54);
  CHECK(bp.front().isApprox(Eigen::Vector2d(-400, -640), 1e-12));
  CHECK(bp.back().isApprox(Eigen::Vector2d(400, 640), 1e-12));
  // row-major: the second corner advances along the column axis
  CHECK(bp[1].isApprox(Eigen::Vector2d(-240, -640), 1e-12));
}

TEST_CASE("pose recipes validate their angle and depth ranges") {
  PoseRecipe r = fixtures::recipe();
  r.dihedral_deg = 0.0;
  CHECK_THROWS_AS(realize_pose(r), Error);
  r.dihedral_deg = 90.0;
  CHECK_THROWS_AS(realize_pose(r), Error);
  r.dihedral_deg = 45.0;
  r.depth = 0.0;
  CHECK_THROWS_AS(realize_pose(r), Error);
}

TEST_CASE("the base recipe realizes the tilted-about-x pose") {
  const BoardPose pose = realize_pose(fixtures::recipe());
  CHECK(pose.rotation.isApprox(fixtures::rot_x(45), 1e-12));
  CHECK(pose.translation.isApprox(Eigen::Vector3d(0, 0, 2600), 1e-12));
}

TEST_CASE("in-plane spin carries a translated board around the rotation center") {
  // With the center at the origin, the spin moves the *arrangement*: a board
  // centered at (50, 0) swings to (0, 50) after a quarter turn.
  const BoardPose pose = realize_pose(fixtures::recipe(90.0, 50.0, 0.0));
  CHECK(pose.translation.isApprox(Eigen::Vector3d(0, 50, 2600), 1e-9));
  CHECK(pose.rotation.isApprox(fixtures::rot_z(90) * fixtures::rot_x(45), 1e-12));
}

TEST_CASE("placing the rotation center on the board makes it spin in place") {
  PoseRecipe r = fixtures::recipe(90.0, 50.0, 0.0);
  r.rotation_center = Eigen::Vector2d(50.0, 0.0);
  const BoardPose pose = realize_pose(r);
  CHECK(pose.translation.isApprox(Eigen::Vector3d(50, 0, 2600), 1e-9));
  CHECK(pose.rotation.isApprox(fixtures::rot_z(90) * fixtures::rot_x(45), 1e-12));
}

TEST_CASE("spin angles compose additively on the rotation part") {
  const BoardPose a = realize_pose(fixtures::recipe(30.0, 20.0, -10.0));
  const BoardPose b = realize_pose(fixtures::recipe(210.0, 20.0, -10.0));
  CHECK((fixtures::rot_z(180) * a.rotation).isApprox(b.rotation, 1e-12));
  // and the carried translations sit opposite each other across the center
  const Eigen::Vector2d pa(a.translation.x(), a.translation.y());
  const Eigen::Vector2d pb(b.translation.x(), b.translation.y());
  CHECK((pa + pb).norm() <= 1e-9);
}

TEST_CASE("ground-truth principal lines follow the spin") {
  const auto cam = fixtures::camera();
  const ImageLine base = ground_truth_principal_line(cam, realize_pose(fixtures::recipe()));
  CHECK(base.a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(base.c == doctest::Approx(-960.0).epsilon(1e-12));
  const ImageLine quarter =
      ground_truth_principal_line(cam, realize_pose(fixtures::recipe(90.0)));
  CHECK(std::abs(quarter.a) <= 1e-12);
  CHECK(quarter.c == doctest::Approx(-540.0).epsilon(1e-12));
}

TEST_CASE("pose rings enumerate evenly spaced spins with distinct ids") {
  const auto ring = pose_ring(named(fixtures::recipe(), "ring"), 8, 45.0);
  REQUIRE(ring.size() == 8);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    CHECK(ring[i].alpha_deg == doctest::Approx(45.0 * static_cast<double>(i)));
    ids.insert(ring[i].pose_id);
  }
  CHECK(ids.size() == 8);
  CHECK_THROWS_AS(pose_ring(fixtures::recipe(), 1, 45.0), Error);
}

TEST_CASE("paired poses differ by a half turn") {
  const auto pairs = paired_poses({0.0, 45.0, 90.0, 135.0}, named(fixtures::recipe(), "pair"));
  REQUIRE(pairs.size() == 4);
  for (const auto& [first, second] : pairs) {
    CHECK(second.alpha_deg == doctest::Approx(first.alpha_deg + 180.0));
    CHECK(first.pose_id != second.pose_id);
  }
}

TEST_CASE("skip selections walk the ring modularly") {
  const auto none = skip_sets(8, 0);
  REQUIRE(none.size() == 1);
  CHECK((none[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));

  const auto one = skip_sets(8, 1);
  REQUIRE(one.size() == 8);
  CHECK((one[0] == std::vector<int>{1, 2, 3, 4, 5, 6, 7}));
  CHECK((one[5] == std::vector<int>{0, 1, 2, 3, 4, 6, 7}));

  const auto five = skip_sets(8, 5);
  REQUIRE(five.size() == 8);
  CHECK((five[6] == std::vector<int>{3, 4, 5}));

  CHECK_THROWS_AS(skip_sets(8, 6), TooFewRemaining);
  CHECK_THROWS_AS(skip_sets(8, -1), TooFewRemaining);
}

TEST_CASE("noiseless rendering reproduces direct projection") {
  const auto cam = fixtures::camera();
  const auto dist = fixtures::distortion();
  const auto board = fixtures::board();
  const PoseRecipe recipe = fixtures::recipe(30.0, 40.0, -20.0);
  const ObservationSet set = render_corners(cam, dist, recipe, board, 0.0, 17);
  REQUIRE(set.correspondences.size() == 54);
  CHECK(set.noise_sigma == 0.0);
  CHECK(set.out_of_frame.empty());
  const BoardPose pose = realize_pose(recipe);
  for (const auto& c : set.correspondences) {
    const Eigen::Vector2d direct = project(cam, dist, pose, c.board);
    CHECK((c.pixel - direct).norm() <= 1e-12);
  }
}

TEST_CASE("rendering is reproducible per seed and pose id") {
  const auto cam = fixtures::camera();
  const auto dist = fixtures::distortion();
  const auto board = fixtures::board();
  const PoseRecipe recipe = named(fixtures::recipe(), "noise_probe");
  const ObservationSet a = render_corners(cam, dist, recipe, board, 0.5, 99);
  const ObservationSet b = render_corners(cam, dist, recipe, board, 0.5, 99);
  const ObservationSet c = render_corners(cam, dist, recipe, board, 0.5, 100);
  const ObservationSet d =
      render_corners(cam, dist, named(recipe, "other_id"), board, 0.5, 99);
  bool differs_seed = false;
  bool differs_id = false;
  for (std::size_t i = 0; i < a.correspondences.size(); ++i) {
    CHECK((a.correspondences[i].pixel - b.correspondences[i].pixel).norm() == 0.0);
    differs_seed |= (a.correspondences[i].pixel - c.correspondences[i].pixel).norm() != 0.0;
    differs_id |= (a.correspondences[i].pixel - d.correspondences[i].pixel).norm() != 0.0;
  }
  CHECK(differs_seed);
  CHECK(differs_id);
}

TEST_CASE("rendered noise has the requested spread") {
  const auto cam = fixtures::camera();
  const auto board = make_checkerboard(100, 100, 8.0);  // 10^4 corners in frame
  const PoseRecipe recipe = named(fixtures::recipe(), "sigma_check");
  const ObservationSet noisy =
      render_corners(cam, fixtures::no_distortion(), recipe, board, 0.5, 4242);
  const ObservationSet clean =
      render_corners(cam, fixtures::no_distortion(), recipe, board, 0.0, 4242);
  REQUIRE(noisy.correspondences.size() == clean.correspondences.size());
  double sum_sq = 0.0;
  const auto n = static_cast<double>(noisy.correspondences.size());
  for (std::size_t i = 0; i < noisy.correspondences.size(); ++i) {
    const Eigen::Vector2d delta =
        noisy.correspondences[i].pixel - clean.correspondences[i].pixel;
    sum_sq += delta.squaredNorm();
  }
  const double per_axis_std = std::sqrt(sum_sq / (2.0 * n));
  CHECK(per_axis_std >= 0.47);
  CHECK(per_axis_std <= 0.53);
}

TEST_CASE("corners outside the frame are counted") {
  const auto cam = fixtures::camera();
  const ObservationSet set = render_corners(cam, fixtures::no_distortion(),
                                            fixtures::recipe(0.0, 4000.0, 0.0),
                                            fixtures::board(), 0.0, 1);
  CHECK(!set.out_of_frame.empty());
  const ObservationSet centered = render_corners(cam, fixtures::no_distortion(),
                                                 fixtures::recipe(), fixtures::board(), 0.0, 1);
  CHECK(centered.out_of_frame.empty());
}

TEST_CASE("a half-turn spin rotates the noiseless image about the principal point") {
  // Radial distortion is symmetric about the pp, so even with distortion the
  // half-turn partner's corners are the originals rotated 180 degrees —
  // corner for corner, because the spin carries the whole arrangement.
  const auto cam = fixtures::camera();
  const auto dist = fixtures::distortion();
  const auto board = fixtures::board();
  for (const Eigen::Vector2d t : {Eigen::Vector2d(0, 0), Eigen::Vector2d(30, 40)}) {
    const ObservationSet base =
        render_corners(cam, dist, fixtures::recipe(0.0, t.x(), t.y()), board, 0.0, 1);
    const ObservationSet half =
        render_corners(cam, dist, fixtures::recipe(180.0, t.x(), t.y()), board, 0.0, 1);
    const Eigen::Vector2d pp(cam.u0, cam.v0);
    for (std::size_t i = 0; i < base.correspondences.size(); ++i) {
      const Eigen::Vector2d rotated = 2.0 * pp - base.correspondences[i].pixel;
      CHECK((half.correspondences[i].pixel - rotated).norm() <= 1e-9);
    }
  }
}

}  // TEST_SUITE("scene")
