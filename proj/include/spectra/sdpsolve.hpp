#pragma once

// Float solvers for the subproblems of the reduction algorithm.
//
// All problems live on the face K = 0 (+) S_+^{n-r}: only the trailing
// (n-r) x (n-r) blocks M_i of the constraint matrices matter. Each subproblem
// is posed as a bounded SDP whose primal and dual are both strictly feasible,
// so the interior-point core converges; its optimum decides the dichotomy and
// its multipliers give the dual ray.
//
// Nothing returned here is trusted: rays and points are re-verified exactly by
// the caller.

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "spectra/system.hpp"

namespace spectra {

struct ToleranceProfile {
  double eq = 1e-9;    // equality residuals
  double pd = 1e-9;    // eigenvalue floor for strict positivity
  double rank = 1e-7;  // eigenvalue cut for numeric rank / decision margin
  int max_iterations = 200;
};

struct FaceDescriptor {
  std::size_t n = 0;
  std::size_t r = 0;  // leading rows/columns forced to zero
  std::size_t order() const { return n - r; }
};

enum class OutcomeTag { StrictlyFeasible, DualRay, NoRay, NumericFailure };

std::string to_string(OutcomeTag t);

struct SolverDiagnostics {
  int iterations = 0;
  double objective = 0.0;  // optimal margin t (min eigenvalue after scaling)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double ray_residual = 0.0;
  std::string note;
};

struct SubproblemOutcome {
  OutcomeTag tag = OutcomeTag::NumericFailure;
  // StrictlyFeasible: point (X, x0) of the homogenized system, X in K.
  Eigen::MatrixXd X;
  double x0 = 0.0;
  // DualRay: multipliers over all m equations.
  Eigen::VectorXd y;
  SolverDiagnostics diagnostics;
};

/// Is the homogenized system over K strictly feasible? Returns a strictly
/// feasible (X, x0), or a ray y with sum y_i b_i = 0 and a psd, nonzero
/// trailing block of sum y_i A_i (trace normalized to 1).
SubproblemOutcome solve_aux(const SdpSystem& system, const FaceDescriptor& face,
                            const ToleranceProfile& tol);

/// Homogenized problem sup x0. Returns (X, x0) with x0 > 0 and X in ri K when
/// the system restricted to K has a strictly positive solution, or a ray y
/// with sum y_i b_i = -1 and psd trailing block. NoRay when the optimum is 0
/// but only rays with sum y_i b_i = 0 exist. For n - r == 0 the answer comes
/// from exact linear algebra.
SubproblemOutcome solve_hom(const SdpSystem& system, const FaceDescriptor& face,
                            const ToleranceProfile& tol);

/// Searches for y with sum y_i A_i psd and sum y_i b_i = -1.
SubproblemOutcome solve_farkas(const SdpSystem& system,
                               const ToleranceProfile& tol);

/// Trailing (n-r) block of every A_i as floats.
std::vector<Eigen::MatrixXd> trailing_blocks(const SdpSystem& system,
                                             std::size_t r);

}  // namespace spectra
