#include "spectra/sdpsolve.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/ipm.hpp"

namespace spectra {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

Index svec_size(Index q) { return q * (q + 1) / 2; }

// Coefficients of M . Y in the upper-triangular coordinates of Y.
VectorXd constraint_row(const MatrixXd& m) {
  const Index q = m.rows();
  VectorXd row(svec_size(q));
  Index k = 0;
  for (Index i = 0; i < q; ++i)
    for (Index j = i; j < q; ++j) row(k++) = (i == j) ? m(i, i) : 2.0 * m(i, j);
  return row;
}

MatrixXd from_svec(const VectorXd& u, Index q) {
  MatrixXd m(q, q);
  Index k = 0;
  for (Index i = 0; i < q; ++i)
    for (Index j = i; j < q; ++j) {
      m(i, j) = u(k);
      m(j, i) = u(k);
      ++k;
    }
  return m;
}

// Orthonormal basis (columns) of the null space of e.
MatrixXd nullspace_basis(const MatrixXd& e, Index cols) {
  if (e.rows() == 0) return MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<MatrixXd> svd(e, Eigen::ComputeFullV);
  const VectorXd& s = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

// Orthonormal basis (columns) of the range of a.
MatrixXd range_basis(const MatrixXd& a) {
  if (a.cols() == 0) return MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
  const VectorXd& s = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

MatrixXd embed(const MatrixXd& lower, std::size_t n) {
  const Index q = lower.rows();
  MatrixXd x = MatrixXd::Zero(static_cast<Index>(n), static_cast<Index>(n));
  x.bottomRightCorner(q, q) = lower;
  return x;
}

// Least-squares y with sum y_i M_i = target and sum y_i c_i = target_c.
VectorXd recover_ray(const std::vector<MatrixXd>& m, const VectorXd& c,
                     const MatrixXd& target, double target_c,
                     double& residual) {
  const Index q = target.rows();
  const Index rows = q * q + 1;
  MatrixXd g(rows, static_cast<Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    g.col(static_cast<Index>(i)).head(q * q) =
        Eigen::Map<const VectorXd>(m[i].data(), q * q);
    g(q * q, static_cast<Index>(i)) = c(static_cast<Index>(i));
  }
  VectorXd rhs(rows);
  rhs.head(q * q) = Eigen::Map<const VectorXd>(target.data(), q * q);
  rhs(q * q) = target_c;
  VectorXd y = g.completeOrthogonalDecomposition().solve(rhs);
  residual = (g * y - rhs).norm();
  return y;
}

ipm::Settings settings_for(const ToleranceProfile& tol) {
  ipm::Settings s;
  s.max_iterations = tol.max_iterations;
  return s;
}

bool usable(const ipm::Result& r) {
  if (r.status == ipm::Status::Converged) return true;
  return r.primal_infeasibility < 1e-8 && r.dual_infeasibility < 1e-8 &&
         r.relative_gap < 1e-8;
}

void fill_diagnostics(SolverDiagnostics& d, const ipm::Result& r) {
  d.iterations = r.iterations;
  d.primal_residual = r.primal_infeasibility;
  d.dual_residual = r.dual_infeasibility;
  d.gap = r.relative_gap;
}

double min_eigenvalue(const MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct HomResult {
  ipm::Result raw;
  MatrixXd Y;
  double x0 = 0.0;
  double t = 0.0;
  MatrixXd ray_block;  // X1 - x3 I
  double ray_rhs = 0.0;  // x3 - x2
};

// max t  s.t.  M_i . Y = c_i x0,  Y >= t I,  x0 >= t,  tr Y + x0 <= q + 1.
HomResult solve_hom_core(const std::vector<MatrixXd>& m, const VectorXd& c,
                         Index q, const ToleranceProfile& tol) {
  const Index sv = svec_size(q);
  MatrixXd e(static_cast<Index>(m.size()), sv + 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    e.row(static_cast<Index>(i)).head(sv) = constraint_row(m[i]).transpose();
    e(static_cast<Index>(i), sv) = -c(static_cast<Index>(i));
  }
  const MatrixXd basis = nullspace_basis(e, sv + 1);
  const Index d = basis.cols();
  const Index N = q + 2;

  ipm::DenseSdp p;
  p.C = MatrixXd::Zero(N, N);
  p.C(q + 1, q + 1) = static_cast<double>(q + 1);
  std::vector<MatrixXd> bmats;
  std::vector<double> betas;
  for (Index k = 0; k < d; ++k) {
    MatrixXd bk = from_svec(basis.col(k).head(sv), q);
    double beta = basis(sv, k);
    MatrixXd a = MatrixXd::Zero(N, N);
    a.topLeftCorner(q, q) = -bk;
    a(q, q) = -beta;
    a(q + 1, q + 1) = bk.trace() + beta;
    p.A.push_back(a);
    bmats.push_back(std::move(bk));
    betas.push_back(beta);
  }
  MatrixXd at = MatrixXd::Zero(N, N);
  at.topLeftCorner(q, q) = MatrixXd::Identity(q, q);
  at(q, q) = 1.0;
  p.A.push_back(at);
  p.b = VectorXd::Zero(d + 1);
  p.b(d) = 1.0;

  HomResult out;
  out.raw = ipm::solve(p, settings_for(tol));
  const VectorXd& z = out.raw.y;
  out.Y = MatrixXd::Zero(q, q);
  for (Index k = 0; k < d; ++k) {
    out.Y += z(k) * bmats[static_cast<std::size_t>(k)];
    out.x0 += z(k) * betas[static_cast<std::size_t>(k)];
  }
  out.t = z.size() ? z(d) : 0.0;
  const MatrixXd& x = out.raw.X;
  const double x3 = x(q + 1, q + 1);
  out.ray_block = x.topLeftCorner(q, q) - x3 * MatrixXd::Identity(q, q);
  out.ray_rhs = x3 - x(q, q);
  return out;
}

}  // namespace

std::string to_string(OutcomeTag t) {
  switch (t) {
    case OutcomeTag::StrictlyFeasible: return "strictly-feasible";
    case OutcomeTag::DualRay: return "dual-ray";
    case OutcomeTag::NoRay: return "no-ray";
    case OutcomeTag::NumericFailure: return "numeric-failure";
  }
  return "numeric-failure";
}

std::vector<MatrixXd> trailing_blocks(const SdpSystem& system, std::size_t r) {
  const Index q = static_cast<Index>(system.n - r);
  std::vector<MatrixXd> out;
  out.reserve(system.m());
  for (const auto& a : system.A)
    out.push_back(to_eigen(a).bottomRightCorner(q, q));
  return out;
}

SubproblemOutcome solve_aux(const SdpSystem& system, const FaceDescriptor& face,
                            const ToleranceProfile& tol) {
  if (face.r >= face.n) throw Error("solve_aux needs a nonempty face");
  const Index q = static_cast<Index>(face.order());
  const auto m = trailing_blocks(system, face.r);
  const VectorXd c = to_eigen(system.b);
  const Index sv = svec_size(q);

  // Y-part of {(Y, x0) : M_i . Y = c_i x0}; x0 is free here.
  MatrixXd e(static_cast<Index>(m.size()), sv + 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    e.row(static_cast<Index>(i)).head(sv) = constraint_row(m[i]).transpose();
    e(static_cast<Index>(i), sv) = -c(static_cast<Index>(i));
  }
  const MatrixXd ybasis = range_basis(nullspace_basis(e, sv + 1).topRows(sv));
  const Index d = ybasis.cols();
  const Index N = q + 1;

  // max t  s.t.  Y >= t I,  tr Y <= q,  Y in the subspace.
  ipm::DenseSdp p;
  p.C = MatrixXd::Zero(N, N);
  p.C(q, q) = static_cast<double>(q);
  std::vector<MatrixXd> bmats;
  for (Index k = 0; k < d; ++k) {
    MatrixXd bk = from_svec(ybasis.col(k), q);
    MatrixXd a = MatrixXd::Zero(N, N);
    a.topLeftCorner(q, q) = -bk;
    a(q, q) = bk.trace();
    p.A.push_back(a);
    bmats.push_back(std::move(bk));
  }
  MatrixXd at = MatrixXd::Zero(N, N);
  at.topLeftCorner(q, q) = MatrixXd::Identity(q, q);
  p.A.push_back(at);
  p.b = VectorXd::Zero(d + 1);
  p.b(d) = 1.0;

  const ipm::Result raw = ipm::solve(p, settings_for(tol));
  SubproblemOutcome out;
  fill_diagnostics(out.diagnostics, raw);
  MatrixXd Y = MatrixXd::Zero(q, q);
  for (Index k = 0; k < d; ++k) Y += raw.y(k) * bmats[static_cast<std::size_t>(k)];
  const double t = raw.y(d);
  out.diagnostics.objective = t;

  const double cn = c.squaredNorm();
  double x0 = 0.0;
  if (cn > 0) {
    VectorXd my(static_cast<Index>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
      my(static_cast<Index>(i)) = m[i].cwiseProduct(Y).sum();
    x0 = c.dot(my) / cn;
  }

  if (t > tol.rank && min_eigenvalue(Y) > tol.pd) {
    out.tag = OutcomeTag::StrictlyFeasible;
    out.X = embed(Y, face.n);
    out.x0 = x0;
    return out;
  }
  const MatrixXd x1 = raw.X.topLeftCorner(q, q) - raw.X(q, q) * MatrixXd::Identity(q, q);
  double residual = 0.0;
  out.y = recover_ray(m, c, x1, 0.0, residual);
  out.diagnostics.ray_residual = residual;
  out.tag = usable(raw) ? OutcomeTag::DualRay : OutcomeTag::NumericFailure;
  if (out.tag == OutcomeTag::NumericFailure)
    out.diagnostics.note = "interior-point method did not converge";
  return out;
}

SubproblemOutcome solve_hom(const SdpSystem& system, const FaceDescriptor& face,
                            const ToleranceProfile& tol) {
  SubproblemOutcome out;
  const Index q = static_cast<Index>(face.order());
  const VectorXd c = to_eigen(system.b);
  if (q == 0) {
    // K = {0}: feasible iff every b_i vanishes.
    for (std::size_t j = 0; j < system.m(); ++j) {
      if (sgn(system.b[j]) != 0) {
        out.tag = OutcomeTag::DualRay;
        out.y = VectorXd::Zero(static_cast<Index>(system.m()));
        out.y(static_cast<Index>(j)) = -1.0 / system.b[j].get_d();
        out.diagnostics.note = "exact: empty face";
        return out;
      }
    }
    out.tag = OutcomeTag::StrictlyFeasible;
    out.X = MatrixXd::Zero(static_cast<Index>(face.n), static_cast<Index>(face.n));
    out.x0 = 1.0;
    out.diagnostics.note = "exact: empty face";
    return out;
  }

  const auto m = trailing_blocks(system, face.r);
  HomResult h = solve_hom_core(m, c, q, tol);
  fill_diagnostics(out.diagnostics, h.raw);
  out.diagnostics.objective = h.t;
  if (h.t > tol.rank && h.x0 > tol.pd && min_eigenvalue(h.Y) > tol.pd) {
    out.tag = OutcomeTag::StrictlyFeasible;
    out.X = embed(h.Y, face.n);
    out.x0 = h.x0;
    return out;
  }
  double residual = 0.0;
  VectorXd y = recover_ray(m, c, h.ray_block, h.ray_rhs, residual);
  out.diagnostics.ray_residual = residual;
  if (!usable(h.raw)) {
    out.tag = OutcomeTag::NumericFailure;
    out.y = y;
    out.diagnostics.note = "interior-point method did not converge";
    return out;
  }
  // Normalization: tr X1 + x2 = 1, so -ray_rhs is on the unit scale.
  if (-h.ray_rhs > tol.rank) {
    out.tag = OutcomeTag::DualRay;
    out.y = y / (-h.ray_rhs);
    out.diagnostics.ray_residual = residual / (-h.ray_rhs);
    return out;
  }
  out.tag = OutcomeTag::NoRay;
  out.y = y;
  out.diagnostics.note = "optimal value 0 but every ray has sum y_i b_i = 0";
  return out;
}

SubproblemOutcome solve_farkas(const SdpSystem& system,
                               const ToleranceProfile& tol) {
  return solve_hom(system, FaceDescriptor{system.n, 0}, tol);
}

}  // namespace spectra
