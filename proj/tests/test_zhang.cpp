#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "plcalib/camera.hpp"
#include "plcalib/errors.hpp"
#include "plcalib/homography.hpp"
#include "plcalib/scene.hpp"
#include "plcalib/zhang.hpp"
#include "test_fixtures.hpp"

using namespace plcalib;

namespace {

std::vector<ObservationSet> ring_observations(const RadialDistortion& dist, double sigma = 0.0,
                                              std::uint64_t seed = 1,
                                              const Eigen::Vector2d& t = {0.0, 0.0}) {
  std::vector<ObservationSet> sets;
  for (const PoseRecipe& recipe : pose_ring(fixtures::recipe(0.0, t.x(), t.y()), 8, 45.0)) {
    sets.push_back(fixtures::observe(recipe, dist, sigma, seed));
  }
  return sets;
}

}  // namespace

TEST_SUITE("zhang") {

TEST_CASE("closed-form intrinsics from exact homographies") {
  const auto cam = fixtures::camera();
  std::vector<Eigen::Matrix3d> hs;
  for (const PoseRecipe& recipe : pose_ring(fixtures::recipe(), 4, 45.0)) {
    hs.push_back(fixtures::exact_homography(cam, realize_pose(recipe)));
  }
  const CameraIntrinsics est = intrinsics_from_homographies(hs, 1920, 1080);
  CHECK(est.f == doctest::Approx(1600.0).epsilon(1e-9));
  CHECK(est.u0 == doctest::Approx(960.0).epsilon(1e-9));
  CHECK(est.v0 == doctest::Approx(540.0).epsilon(1e-9));

  CHECK_THROWS_AS(intrinsics_from_homographies({hs[0]}, 1920, 1080), DegenerateSet);
}

TEST_CASE("parallel board planes leave the intrinsics undetermined") {
  const auto cam = fixtures::camera();
  std::vector<Eigen::Matrix3d> hs;
  for (double tx : {-200.0, 0.0, 200.0, 400.0}) {
    // same orientation every time, only the translation moves
    PoseRecipe recipe = fixtures::recipe();
    const BoardPose pose =
        make_pose(realize_pose(recipe).rotation, Eigen::Vector3d(tx, 0.0, 2600.0));
    hs.push_back(fixtures::exact_homography(cam, pose));
  }
  CHECK_THROWS_AS(intrinsics_from_homographies(hs, 1920, 1080), DegenerateSet);
}

TEST_CASE("pose recovery from an exact homography") {
  const auto cam = fixtures::camera();
  const BoardPose truth = realize_pose(fixtures::recipe(30.0, 80.0, -60.0));
  const BoardPose recovered =
      pose_from_homography(cam, fixtures::exact_homography(cam, truth));
  CHECK(recovered.rotation.isApprox(truth.rotation, 1e-9));
  CHECK(recovered.translation.isApprox(truth.translation, 1e-9));
}

TEST_CASE("distortion fit recovers the true coefficients given the true geometry") {
  const auto cam = fixtures::camera();
  const auto dist = fixtures::distortion();
  std::vector<ObservationSet> sets;
  std::vector<BoardPose> poses;
  for (const PoseRecipe& recipe : pose_ring(fixtures::recipe(), 4, 90.0)) {
    sets.push_back(fixtures::observe(recipe, dist));
    poses.push_back(realize_pose(recipe));
  }
  const RadialDistortion fitted = fit_radial_distortion(cam, sets, poses);
  CHECK(fitted.k1 == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(fitted.k2 == doctest::Approx(-0.02).epsilon(1e-5));
}

TEST_CASE("clean distortion-free ring calibrates to the ground truth") {
  const CalibrationResult result = calibrate_zhang(ring_observations(fixtures::no_distortion()));
  CHECK(std::abs(result.intrinsics.f - 1600.0) <= 1e-3);
  CHECK(std::abs(result.intrinsics.u0 - 960.0) <= 1e-3);
  CHECK(std::abs(result.intrinsics.v0 - 540.0) <= 1e-3);
  CHECK(std::abs(result.distortion.k1) <= 1e-6);
  CHECK(std::abs(result.distortion.k2) <= 1e-6);
  CHECK(result.rms_reprojection <= 1e-6);
  REQUIRE(result.per_pose.size() == 8);
}

TEST_CASE("distortion-free input converges without alternation and matches the closed form") {
  const auto sets = ring_observations(fixtures::no_distortion());
  ZhangOptions options;
  options.refine = false;
  const CalibrationResult result = calibrate_zhang(sets, options);
  CHECK(result.iterations <= 1);

  std::vector<Eigen::Matrix3d> hs;
  for (const auto& obs : sets) hs.push_back(estimate_homography(obs));
  const CameraIntrinsics closed = intrinsics_from_homographies(hs, 1920, 1080);
  CHECK(result.intrinsics.f == doctest::Approx(closed.f).epsilon(1e-12));
  CHECK(result.intrinsics.u0 == doctest::Approx(closed.u0).epsilon(1e-12));
  CHECK(result.intrinsics.v0 == doctest::Approx(closed.v0).epsilon(1e-12));
}

TEST_CASE("alternation recovers the distortion coefficients on clean distorted views") {
  const CalibrationResult result = calibrate_zhang(ring_observations(fixtures::distortion()));
  CHECK(std::abs(result.distortion.k1 + 0.1) <= 0.05 * 0.1);
  CHECK(std::abs(result.distortion.k2 + 0.02) <= 0.05 * 0.02);
  CHECK(std::abs(result.intrinsics.u0 - 960.0) <= 1.0);
  CHECK(std::abs(result.intrinsics.v0 - 540.0) <= 1.0);
}

TEST_CASE("too few views are rejected") {
  const auto sets = ring_observations(fixtures::no_distortion());
  CHECK_THROWS_AS(calibrate_zhang({sets[0]}), DegenerateSet);
  CHECK_THROWS_AS(calibrate_zhang({sets[0], sets[1]}), DegenerateSet);
}

TEST_CASE("refinement never reports a worse rms than the linear stage") {
  const auto sets = ring_observations(fixtures::distortion(), 0.5, 7);
  ZhangOptions linear_only;
  linear_only.refine = false;
  const CalibrationResult linear = calibrate_zhang(sets, linear_only);
  const CalibrationResult refined = calibrate_zhang(sets);
  CHECK(refined.rms_reprojection <= linear.rms_reprojection + 1e-12);
  // with sigma = 0.5 per axis the floor sits near 0.5 * sqrt(2) minus the dof
  CHECK(refined.rms_reprojection <= 1.0);
}

TEST_CASE("the reported rms is recomputable from the result fields") {
  const auto sets = ring_observations(fixtures::distortion(), 0.5, 11);
  const CalibrationResult result = calibrate_zhang(sets);
  const double recomputed =
      reprojection_rms(result.intrinsics, result.distortion, sets, result.per_pose);
  CHECK(std::abs(recomputed - result.rms_reprojection) <= 1e-6);
}

TEST_CASE("the result does not depend on the order of the views") {
  // clean data: the optimum is sharp, both orders land on the ground truth
  auto clean = ring_observations(fixtures::distortion());
  const CalibrationResult forward_clean = calibrate_zhang(clean);
  std::reverse(clean.begin(), clean.end());
  const CalibrationResult backward_clean = calibrate_zhang(clean);
  CHECK(std::abs(forward_clean.intrinsics.f - backward_clean.intrinsics.f) <= 1e-6);
  CHECK(std::abs(forward_clean.intrinsics.u0 - backward_clean.intrinsics.u0) <= 1e-6);
  CHECK(std::abs(forward_clean.intrinsics.v0 - backward_clean.intrinsics.v0) <= 1e-6);

  // noisy data: the optimum is flat at the noise floor, so the stopping point
  // wobbles with summation order; invariance holds at the accuracy that the
  // noise supports, far below the ~0.5 px parameter uncertainty itself
  auto noisy = ring_observations(fixtures::distortion(), 0.5, 13);
  const CalibrationResult forward = calibrate_zhang(noisy);
  std::reverse(noisy.begin(), noisy.end());
  const CalibrationResult backward = calibrate_zhang(noisy);
  CHECK(std::abs(forward.intrinsics.f - backward.intrinsics.f) <= 1e-3);
  CHECK(std::abs(forward.intrinsics.u0 - backward.intrinsics.u0) <= 1e-3);
  CHECK(std::abs(forward.intrinsics.v0 - backward.intrinsics.v0) <= 1e-3);
  CHECK(std::abs(forward.distortion.k1 - backward.distortion.k1) <= 1e-5);
  CHECK(std::abs(forward.rms_reprojection - backward.rms_reprojection) <= 1e-6);
}

TEST_CASE("subset calibration returns the principal point for the chosen views") {
  const auto sets = ring_observations(fixtures::no_distortion());
  std::vector<int> all(8);
  for (int i = 0; i < 8; ++i) all[i] = i;
  const Eigen::Vector2d pp = baseline_pp_for_subset(sets, all);
  CHECK((pp - Eigen::Vector2d(960, 540)).norm() <= 1e-3);

  CHECK_THROWS_AS(baseline_pp_for_subset(sets, {0, 1}), DegenerateSet);
  CHECK_THROWS_AS(baseline_pp_for_subset(sets, {0, 1, 99}), Error);
}

TEST_CASE("boards shifted along the tilt axis leave the baseline pp in place") {
  // The arrangement is mirror-symmetric about the vertical image centerline
  // for every skip subset, so all eight estimates agree on u0 to high
  // precision even under distortion.
  const auto sets = ring_observations(fixtures::distortion(), 0.0, 1, {0.0, 50.0});
  std::vector<Eigen::Vector2d> pps;
  ZhangOptions options;
  options.refine = false;  // the symmetry argument holds for the linear stage too
  for (const auto& subset : skip_sets(8, 1)) {
    pps.push_back(baseline_pp_for_subset(sets, subset, options));
  }
  for (std::size_t i = 1; i < pps.size(); ++i) {
    CHECK((pps[i] - pps[0]).norm() <= 0.5);
  }
}

}  // TEST_SUITE("zhang")
