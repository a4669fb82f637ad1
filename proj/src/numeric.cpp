#include "plcalib/numeric.hpp"

#include <cmath>
#include <limits>

#include "plcalib/errors.hpp"

namespace plcalib {

namespace {
constexpr double kRankTolerance = 1e-12;  // relative singular-value cutoff
}

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b) {
  if (A.rows() < A.cols()) {
    throw RankDeficient("least-squares system has fewer rows than columns");
  }
  if (A.rows() != b.size()) {
    throw RankDeficient("least-squares system and right-hand side disagree in size");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < kRankTolerance * sv(0)) {
    throw RankDeficient("least-squares matrix is rank deficient");
  }
  LeastSquaresSolution out;
  out.solution = svd.solve(b);
  out.residual_norm = (A * out.solution - b).norm();
  return out;
}

Eigen::VectorXd smallest_right_singular_vector(const Eigen::MatrixXd& A) {
  if (A.rows() + 1 < A.cols()) {
    throw RankDeficient("nullspace problem needs at least cols-1 rows");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NoConvergence("singular value decomposition did not converge");
  }
  Eigen::VectorXd v = svd.matrixV().col(A.cols() - 1);
  // Deterministic sign: make the first non-negligible entry positive.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

Eigen::VectorXd gauss_newton(const ResidualFn& residual, const JacobianFn& jacobian,
                             Eigen::VectorXd x, int max_iter, double tol,
                             GaussNewtonInfo* info) {
  Eigen::VectorXd r = residual(x);
  double sq = r.squaredNorm();
  GaussNewtonInfo local;
  local.initial_rms = r.size() > 0 ? std::sqrt(sq / static_cast<double>(r.size())) : 0.0;

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd J = jacobian(x);
    const Eigen::VectorXd step = solve_least_squares(J, -r).solution;
    if (step.norm() < tol) {
      local.converged = true;
      break;
    }
    // Halve the step until the squared residual decreases; a Gauss-Newton step
    // can overshoot on curved problems but some fraction of it must descend.
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving) {
      const Eigen::VectorXd candidate = x + scale * step;
      const Eigen::VectorXd rc = residual(candidate);
      const double sqc = rc.squaredNorm();
      if (sqc < sq || (halving == 0 && sqc == sq && step.norm() < tol)) {
        x = candidate;
        r = rc;
        sq = sqc;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      throw Diverged("gauss-newton step halving failed to decrease the residual");
    }
    ++local.iterations;
    if (scale * step.norm() < tol) {
      local.converged = true;
      break;
    }
  }

  local.final_rms = r.size() > 0 ? std::sqrt(sq / static_cast<double>(r.size())) : 0.0;
  if (info != nullptr) *info = local;
  return x;
}

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r0 = residual(x);
  Eigen::MatrixXd J(r0.size(), x.size());
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = root_eps * std::max(1.0, std::abs(x(j)));
    xp(j) = x(j) + h;
    J.col(j) = (residual(xp) - r0) / h;
    xp(j) = x(j);
  }
  return J;
}

}  // namespace plcalib
