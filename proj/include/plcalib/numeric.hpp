#pragma once

#include <Eigen/Dense>
#include <functional>

namespace plcalib {

struct LeastSquaresSolution {
  Eigen::VectorXd solution;
  double residual_norm = 0.0;  // |A*x - b|
};

// Minimum-norm least-squares solution of an overdetermined system via SVD.
// Throws RankDeficient when the smallest singular value falls below 1e-12
// relative to the largest: degenerate geometry must fail loudly.
LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b);

// Unit vector v minimizing |A*v| (the DLT nullspace direction). Sign is fixed
// so the first entry with magnitude above 1e-12 is positive, which keeps
// downstream reports byte-reproducible. Requires rows >= cols - 1.
Eigen::VectorXd smallest_right_singular_vector(const Eigen::MatrixXd& A);

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct GaussNewtonInfo {
  int iterations = 0;       // accepted parameter updates
  double initial_rms = 0.0;
  double final_rms = 0.0;
  bool converged = false;   // step norm fell below tol before max_iter
};

// Plain Gauss-Newton with step halving (up to 20 halvings per iteration) so the
// squared residual norm never increases. Throws Diverged when halving cannot
// find a decreasing step, and propagates RankDeficient from the normal solve.
Eigen::VectorXd gauss_newton(const ResidualFn& residual, const JacobianFn& jacobian,
                             Eigen::VectorXd x0, int max_iter = 50, double tol = 1e-10,
                             GaussNewtonInfo* info = nullptr);

// Forward-difference Jacobian with per-column step sqrt(eps)*max(1, |x_j|).
// The calibration problems here are tiny, so numeric differentiation is fine.
Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x);

}  // namespace plcalib
