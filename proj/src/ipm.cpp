#include "spectra/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectra::ipm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inner(const MatrixXd& a, const MatrixXd& b) {
  return a.cwiseProduct(b).sum();
}

VectorXd apply_ops(const std::vector<MatrixXd>& ops, const MatrixXd& x) {
  VectorXd r(static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k)
    r(static_cast<Eigen::Index>(k)) = inner(ops[k], x);
  return r;
}

MatrixXd adjoint(const std::vector<MatrixXd>& ops, const VectorXd& y,
                 Eigen::Index n) {
  MatrixXd r = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < ops.size(); ++k)
    r += y(static_cast<Eigen::Index>(k)) * ops[k];
  return r;
}

// Largest alpha in (0, 1] (scaled by fraction) keeping x + alpha d psd.
double step_to_boundary(const MatrixXd& x, const MatrixXd& d, double fraction) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd linv = llt.matrixL().solve(MatrixXd::Identity(x.rows(), x.cols()));
  MatrixXd s = linv * d * linv.transpose();
  s = (0.5 * (s + s.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0) return 1.0;
  return std::min(1.0, fraction * (-1.0 / lmin));
}

}  // namespace

Result solve(const DenseSdp& problem, const Settings& settings) {
  const Eigen::Index n = problem.C.rows();
  const std::size_t K = problem.A.size();
  const double nd = static_cast<double>(n);

  double max_a = 0.0, ratio = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double na = problem.A[k].norm();
    max_a = std::max(max_a, na);
    ratio = std::max(ratio, (1.0 + std::abs(problem.b(static_cast<Eigen::Index>(k)))) /
                                (1.0 + na));
  }
  const double norm_b = problem.b.norm();
  const double norm_c = problem.C.norm();
  const double alpha0 = std::max(1.0, nd * ratio);
  const double beta0 = (1.0 + std::max(max_a, norm_c)) / std::sqrt(nd);

  Result res;
  MatrixXd X = alpha0 * MatrixXd::Identity(n, n);
  MatrixXd Z = beta0 * MatrixXd::Identity(n, n);
  VectorXd y = VectorXd::Zero(static_cast<Eigen::Index>(K));
  res.status = Status::IterationLimit;

  auto record = [&](int it) {
    res.X = X;
    res.Z = Z;
    res.y = y;
    res.iterations = it;
    res.primal_objective = inner(problem.C, X);
    res.dual_objective = K ? problem.b.dot(y) : 0.0;
    res.primal_infeasibility =
        (K ? (problem.b - apply_ops(problem.A, X)).norm() : 0.0) / (1.0 + norm_b);
    res.dual_infeasibility =
        (problem.C - adjoint(problem.A, y, n) - Z).norm() / (1.0 + norm_c);
    res.relative_gap = inner(X, Z) / (1.0 + std::abs(res.primal_objective) +
                                      std::abs(res.dual_objective));
  };

  for (int it = 0; it <= settings.max_iterations; ++it) {
    record(it);
    if (res.primal_infeasibility < settings.feasibility_tol &&
        res.dual_infeasibility < settings.feasibility_tol &&
        res.relative_gap < settings.gap_tol) {
      res.status = Status::Converged;
      return res;
    }
    if (it == settings.max_iterations) break;

    const VectorXd rp = problem.b - apply_ops(problem.A, X);
    const MatrixXd rd = problem.C - adjoint(problem.A, y, n) - Z;
    const double mu = inner(X, Z) / nd;

    Eigen::LLT<MatrixXd> zllt(Z);
    if (zllt.info() != Eigen::Success) {
      res.status = Status::NumericalBreakdown;
      return res;
    }
    const MatrixXd zinv = zllt.solve(MatrixXd::Identity(n, n));

    // Schur complement M_kl = A_k . (X A_l Z^{-1}).
    std::vector<MatrixXd> g(K);
    for (std::size_t l = 0; l < K; ++l) g[l] = X * problem.A[l] * zinv;
    MatrixXd schur(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l)
        schur(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
            inner(problem.A[k], g[l].transpose());
    schur = (0.5 * (schur + schur.transpose())).eval();
    Eigen::LDLT<MatrixXd> schur_f(schur);
    if (K > 0 && schur_f.info() != Eigen::Success) {
      res.status = Status::NumericalBreakdown;
      return res;
    }

    const MatrixXd h = X * rd * zinv;

    auto direction = [&](const MatrixXd& extra, MatrixXd& dx, VectorXd& dy,
                         MatrixXd& dz) {
      // extra collects sigma*mu*Z^{-1} and corrector terms.
      const MatrixXd base = extra - X - h;
      VectorXd rhs = rp - apply_ops(problem.A, base);
      dy = K ? VectorXd(schur_f.solve(rhs)) : VectorXd();
      dz = rd - adjoint(problem.A, dy, n);
      dx = base + X * adjoint(problem.A, dy, n) * zinv;
      dx = (0.5 * (dx + dx.transpose())).eval();
      dz = (0.5 * (dz + dz.transpose())).eval();
    };

    MatrixXd dxa, dza;
    VectorXd dya;
    direction(MatrixXd::Zero(n, n), dxa, dya, dza);
    const double ap_a = step_to_boundary(X, dxa, 1.0);
    const double ad_a = step_to_boundary(Z, dza, 1.0);
    const double mu_aff = inner(X + ap_a * dxa, Z + ad_a * dza) / nd;
    double sigma = mu > 0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    MatrixXd dx, dz;
    VectorXd dy;
    direction(sigma * mu * zinv - dxa * dza * zinv, dx, dy, dz);
    const double ap = step_to_boundary(X, dx, settings.step_fraction);
    const double ad = step_to_boundary(Z, dz, settings.step_fraction);
    if (ap <= 0.0 && ad <= 0.0) {
      res.status = Status::NumericalBreakdown;
      return res;
    }
    X += ap * dx;
    Z += ad * dz;
    if (K) y += ad * dy;
    X = (0.5 * (X + X.transpose())).eval();
    Z = (0.5 * (Z + Z.transpose())).eval();
    if (!X.allFinite() || !Z.allFinite() || !y.allFinite()) {
      res.status = Status::NumericalBreakdown;
      return res;
    }
  }
  return res;
}

}  // namespace spectra::ipm
