#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "plcalib/errors.hpp"
#include "plcalib/numeric.hpp"
#include "plcalib/rng.hpp"

using namespace plcalib;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Eigen::VectorXd random_vector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST_SUITE("numeric") {

TEST_CASE("least squares solves the identity system exactly") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  const auto sol = solve_least_squares(A, b);
  CHECK(sol.solution.isApprox(b, 1e-14));
  CHECK(sol.residual_norm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("least squares minimizes an inconsistent single-column system") {
  // minimize (x-1)^2 + (x-3)^2: x = 2, residual sqrt(2)
  Eigen::MatrixXd A(2, 1);
  A << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 3;
  const auto sol = solve_least_squares(A, b);
  CHECK(sol.solution(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.residual_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("least squares matches hand-solved normal equations") {
  // Normal equations reduce to 3x = 1 in both coordinates.
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 0, 0, 1;
  const auto sol = solve_least_squares(A, b);
  CHECK(sol.solution(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.solution(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("least squares rejects rank-deficient systems") {
  Eigen::MatrixXd A(3, 2);
  A << 1, 2, 2, 4, 3, 6;  // second column is twice the first
  Eigen::VectorXd b(3);
  b << 1, 1, 1;
  CHECK_THROWS_AS(solve_least_squares(A, b), RankDeficient);
}

TEST_CASE("residual norm is recomputable from the inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd A = random_matrix(rng, 12, 5);
    const Eigen::VectorXd b = random_vector(rng, 12);
    const auto sol = solve_least_squares(A, b);
    const double recomputed = (A * sol.solution - b).norm();
    CHECK(sol.residual_norm == doctest::Approx(recomputed).epsilon(1e-9));
    // Optimality: the residual is orthogonal to the column space.
    const double opt = (A.transpose() * (A * sol.solution - b)).norm();
    CHECK(opt <= 1e-8 * std::max(1.0, b.norm() * A.norm()));
  }
}

TEST_CASE("smallest right singular vector of a diagonal matrix") {
  Eigen::MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const Eigen::VectorXd v = smallest_right_singular_vector(A);
  CHECK(v.isApprox(Eigen::Vector3d(0, 0, 1), 1e-12));
}

TEST_CASE("smallest right singular vector finds an explicit nullspace") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 0, 0, 0;
  const Eigen::VectorXd v = smallest_right_singular_vector(A);
  CHECK(v.isApprox(Eigen::Vector2d(0, 1), 1e-12));
}

TEST_CASE("smallest right singular vector recovers a planted nullspace") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd planted = random_vector(rng, 9);
    planted.normalize();
    // P projects out the planted direction, so A = B*P kills it exactly.
    const Eigen::MatrixXd P =
        Eigen::MatrixXd::Identity(9, 9) - planted * planted.transpose();
    const Eigen::MatrixXd A = random_matrix(rng, 12, 9) * P;
    const Eigen::VectorXd v = smallest_right_singular_vector(A);
    const double err = std::min((v - planted).norm(), (v + planted).norm());
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("smallest right singular vector is a unit-norm minimizer") {
  Rng rng(13);
  const Eigen::MatrixXd A = random_matrix(rng, 20, 6);
  const Eigen::VectorXd v = smallest_right_singular_vector(A);
  CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  const double best = (A * v).norm();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd u = random_vector(rng, 6);
    u.normalize();
    CHECK(best <= (A * u).norm() + 1e-9);
  }
}

TEST_CASE("smallest right singular vector fixes the sign deterministically") {
  Eigen::MatrixXd A(3, 3);
  A << 1, 0, 0, 0, 1, 0, 0, 0, 1e-6;
  const Eigen::VectorXd v = smallest_right_singular_vector(A);
  CHECK(v(2) > 0.0);  // first non-negligible entry positive
}

TEST_CASE("gauss-newton solves a linear residual in one step") {
  Eigen::VectorXd c(2);
  c << 4.0, -7.0;
  const ResidualFn res = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x - c; };
  const JacobianFn jac = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(x.size(), x.size()));
  };
  GaussNewtonInfo info;
  const Eigen::VectorXd x = gauss_newton(res, jac, Eigen::Vector2d(100, 100), 50, 1e-12, &info);
  CHECK(x.isApprox(c, 1e-12));
  CHECK(info.iterations == 1);
  CHECK(info.converged);
  CHECK(info.final_rms == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gauss-newton reaches an analytic root") {
  const ResidualFn res = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    r << x(0) * x(0) - 2.0, x(1) - 1.0;
    return r;
  };
  const JacobianFn jac = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(2, 2);
    J << 2.0 * x(0), 0.0, 0.0, 1.0;
    return J;
  };
  const Eigen::VectorXd x = gauss_newton(res, jac, Eigen::Vector2d(1.5, 0.0), 50, 1e-12);
  CHECK(x(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gauss-newton agrees with the direct least-squares solver on linear problems") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd A = random_matrix(rng, 10, 4);
    const Eigen::VectorXd b = random_vector(rng, 10);
    const ResidualFn res = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - b; };
    const JacobianFn jac = [&](const Eigen::VectorXd&) { return A; };
    const Eigen::VectorXd direct = solve_least_squares(A, b).solution;
    const Eigen::VectorXd iterated =
        gauss_newton(res, jac, Eigen::VectorXd::Zero(4), 50, 1e-12);
    CHECK((iterated - direct).norm() <= 1e-9);
  }
}

TEST_CASE("gauss-newton reports divergence when no step decreases the residual") {
  // A deliberately wrong-signed jacobian: every (halved) step walks uphill.
  const ResidualFn res = [](const Eigen::VectorXd& x) { return x; };
  const JacobianFn jac = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(-Eigen::MatrixXd::Identity(x.size(), x.size()));
  };
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  CHECK_THROWS_AS(gauss_newton(res, jac, x0, 10, 1e-12), Diverged);
}

TEST_CASE("numeric jacobian matches an analytic jacobian") {
  const ResidualFn res = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(3);
    r << x(0) * x(1), std::sin(x(0)), x(1) * x(1);
    return r;
  };
  Eigen::VectorXd x(2);
  x << 0.7, -1.3;
  Eigen::MatrixXd expected(3, 2);
  expected << x(1), x(0), std::cos(x(0)), 0.0, 0.0, 2.0 * x(1);
  CHECK((numeric_jacobian(res, x) - expected).norm() <= 1e-6);
}

}  // TEST_SUITE("numeric")

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds give different streams") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("uniform01 stays in range with a plausible mean") {
  Rng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("gaussian sample moments match the requested distribution") {
  Rng rng(9);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian(2.0, 3.0);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::sqrt(var) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("derived sub-seeds are stable and stream-specific") {
  const std::uint64_t s1 = derive_seed(1234, "a000");
  CHECK(s1 == derive_seed(1234, "a000"));  // stable across calls
  CHECK(s1 != derive_seed(1234, "a045"));
  CHECK(s1 != derive_seed(1235, "a000"));
}

}  // TEST_SUITE("rng")
