#pragma once

// Dense primal-dual path-following SDP solver (HKM direction with
// Mehrotra predictor-corrector, infeasible start).
//
// Primal:  min C . X   s.t.  A_k . X = b_k,  X psd
// Dual:    max b^T y   s.t.  C - sum_k y_k A_k = Z,  Z psd
//
// Block structure (psd blocks and diagonal LP blocks) is carried implicitly:
// if C and every A_k are block diagonal, all iterates stay block diagonal.

#include <Eigen/Dense>
#include <vector>

namespace spectra::ipm {

struct DenseSdp {
  Eigen::MatrixXd C;
  std::vector<Eigen::MatrixXd> A;
  Eigen::VectorXd b;
};

struct Settings {
  int max_iterations = 200;
  double feasibility_tol = 1e-12;
  double gap_tol = 1e-13;
  double step_fraction = 0.98;
};

enum class Status { Converged, IterationLimit, NumericalBreakdown };

struct Result {
  Status status = Status::NumericalBreakdown;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
  Eigen::VectorXd y;
  int iterations = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_infeasibility = 0.0;    // ||C - A^*(y) - Z|| / (1 + ||C||)
  double relative_gap = 0.0;
};

Result solve(const DenseSdp& problem, const Settings& settings);

}  // namespace spectra::ipm
