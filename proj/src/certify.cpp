#include "spectra/certify.hpp"

#include <cmath>
#include <limits>

#include "spectra/ipm.hpp"

namespace spectra {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

std::string entry(std::size_t i, std::size_t a, std::size_t b) {
  return "A'" + std::to_string(i + 1) + "[" + std::to_string(a) + "," +
         std::to_string(b) + "]";
}

std::string bentry(std::size_t i) { return "b'" + std::to_string(i + 1); }

// Row i occupies [s0, s0 + r): positive diagonal block there, zeros in the
// rest of the trailing part [s0, n) x [s0, n).
void check_row_shape(const SymMatrix& a, std::size_t i, std::size_t s0,
                     std::size_t r, bool want_identity, bool& all_identity,
                     VerificationReport& rep) {
  const std::size_t n = a.order(), s1 = s0 + r;
  for (std::size_t x = s0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) {
      const Rational& v = a(x, y);
      if (x == y && x < s1) {
        if (sgn(v) <= 0)
          rep.fail("block-positive", entry(i, x, y), "diagonal entry " + to_string(v));
        else if (v != 1) {
          all_identity = false;
          if (want_identity)
            rep.fail("block-identity", entry(i, x, y), "expected 1, found " + to_string(v));
        }
      } else if (sgn(v) != 0) {
        rep.fail("forced-zero", entry(i, x, y), "found " + to_string(v));
      }
    }
}

// Indices of a maximal independent subset of the given rows.
std::vector<std::size_t> independent_rows(const std::vector<RatVector>& rows,
                                          std::size_t width) {
  if (rows.empty()) return {};
  Matrix t(width, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t a = 0; a < width; ++a) t(a, j) = rows[j][a];
  return rref(t).second;
}

bool usable(const ipm::Result& r) {
  if (r.status == ipm::Status::Converged) return true;
  return r.primal_infeasibility < 1e-8 && r.dual_infeasibility < 1e-8 &&
         r.relative_gap < 1e-8;
}

}  // namespace

void VerificationReport::fail(std::string check, std::string location,
                              std::string detail) {
  accepted = false;
  failures.push_back({std::move(check), std::move(location), std::move(detail)});
}

void VerificationReport::merge(const VerificationReport& other) {
  if (!other.accepted) accepted = false;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  checked_exactly = checked_exactly && other.checked_exactly;
  if (block_style.empty()) block_style = other.block_style;
}

VerificationReport check_staircase(const StaircaseForm& form,
                                   bool infeasible_variant) {
  VerificationReport rep;
  const SdpSystem& s = form.system;
  const std::size_t n = s.n, m = s.m(), k = form.k;
  const std::size_t rows = infeasible_variant ? k + 1 : k;
  if (s.b.size() != m) {
    rep.fail("shape", "b'", "length " + std::to_string(s.b.size()));
    return rep;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (s.A[i].order() != n) {
      rep.fail("shape", "A'" + std::to_string(i + 1), "wrong order");
      return rep;
    }
  if (form.block_sizes.size() != rows) {
    rep.fail("block-count", "blockSizes",
             "expected " + std::to_string(rows) + " sizes, found " +
                 std::to_string(form.block_sizes.size()));
    return rep;
  }
  if (rows > m) {
    rep.fail("block-count", "k", "k = " + std::to_string(k) + " exceeds the equations");
    return rep;
  }
  std::size_t total = 0;
  for (std::size_t r : form.block_sizes) total += r;
  if (total > n) {
    rep.fail("block-count", "blockSizes", "sizes sum to " + std::to_string(total) +
                                              " > n = " + std::to_string(n));
    return rep;
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (form.block_sizes[i] == 0)
      rep.fail("block-nonempty", "r" + std::to_string(i + 1), "r_i must be positive");
    if (sgn(s.b[i]) != 0) rep.fail("b-zero", bentry(i), "found " + to_string(s.b[i]));
  }
  if (infeasible_variant && s.b[k] != -1)
    rep.fail("b-minus-one", bentry(k), "found " + to_string(s.b[k]));

  const bool want_identity = form.style == BlockStyle::Identity;
  bool all_identity = true;
  std::size_t s0 = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    check_row_shape(s.A[i], i, s0, form.block_sizes[i], want_identity, all_identity, rep);
    s0 += form.block_sizes[i];
  }
  rep.block_style = to_string(all_identity ? BlockStyle::Identity
                                           : BlockStyle::PositiveDiagonal);
  return rep;
}

VerificationReport replay_infeasibility(const StaircaseForm& form) {
  VerificationReport rep = check_staircase(form, true);
  if (!rep.accepted) return rep;
  const std::size_t k = form.k, n = form.system.n;
  // Constraints 1..k force rows/columns [0, s_k) of X to vanish; what is left
  // of constraint k+1 must be psd against b' = -1.
  const std::size_t sk = form.prefix(k);
  const SymMatrix reduced = form.system.A[k].principal_block(sk, n - sk);
  if (!is_psd(reduced))
    rep.fail("reduced-block-psd", "A'" + std::to_string(k + 1),
             "trailing block from index " + std::to_string(sk) + " is not psd");
  if (form.system.b[k] != -1)
    rep.fail("b-minus-one", bentry(k), "found " + to_string(form.system.b[k]));
  return rep;
}

VerificationReport verify_transcript(const SdpSystem& source,
                                     const SdpSystem& result,
                                     const Transcript& t, double tol) {
  VerificationReport rep;
  const std::size_t m = source.m(), n = source.n;
  if (result.m() != m || result.n != n) {
    rep.fail("shape", "system", "source and result differ in size");
    return rep;
  }
  if (t.T.rows() != m || t.T.cols() != m || t.V.rows() != n || t.V.cols() != n) {
    rep.fail("shape", "transcript", "T must be m x m and V must be n x n");
    return rep;
  }
  if (m > 0 && sgn(determinant(t.T)) == 0) rep.fail("invertible", "T", "det(T) = 0");
  if (sgn(determinant(t.V)) == 0) rep.fail("invertible", "V", "det(V) = 0");
  if (!rep.accepted) return rep;

  const SdpSystem mapped = apply_transcript(source, t);
  for (std::size_t i = 0; i < m; ++i) {
    if (mapped.b[i] != result.b[i])
      rep.fail("rhs", bentry(i), "T b gives " + to_string(mapped.b[i]) +
                                     ", found " + to_string(result.b[i]));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        if (mapped.A[i](a, b) != result.A[i](a, b))
          rep.fail("matrix", entry(i, a, b),
                   "V^T(sum T A)V gives " + to_string(mapped.A[i](a, b)) +
                       ", found " + to_string(result.A[i](a, b)));
  }

  if (t.mode == Mode::Float && t.V_float) {
    rep.checked_exactly = false;
    const MatrixXd& vf = *t.V_float;
    if (vf.rows() != static_cast<Index>(n) || vf.cols() != static_cast<Index>(n)) {
      rep.fail("shape", "V_float", "wrong shape");
      return rep;
    }
    // V_float must agree with V up to a positive diagonal column scaling.
    const MatrixXd v = to_eigen(t.V);
    for (Index c = 0; c < vf.cols(); ++c) {
      const double scale = v.col(c).dot(vf.col(c)) / v.col(c).squaredNorm();
      if (!(scale > 0) || (vf.col(c) - scale * v.col(c)).norm() >
                              tol * std::max(1.0, vf.col(c).norm()))
        rep.fail("float-rotation", "V_float[:," + std::to_string(c) + "]",
                 "not a positive multiple of the exact column");
    }
  }
  return rep;
}

VerificationReport check_max_rank(const StaircaseForm& form, const SymMatrix& X,
                                  std::size_t p) {
  VerificationReport rep = check_staircase(form, false);
  const SdpSystem& s = form.system;
  const std::size_t n = s.n;
  if (X.order() != n) {
    rep.fail("witness-shape", "X", "order " + std::to_string(X.order()));
    return rep;
  }
  if (form.prefix(form.k) + p != n)
    rep.fail("rank-count", "blockSizes",
             "sum r_i = " + std::to_string(form.prefix(form.k)) + " but n - p = " +
                 std::to_string(n - std::min(n, p)));
  if (!is_psd(X)) rep.fail("witness-psd", "X", "X is not psd");
  for (std::size_t i = 0; i < s.m(); ++i) {
    Rational v = dot(s.A[i], X);
    if (v != s.b[i])
      rep.fail("witness-feasible", "A'" + std::to_string(i + 1) + " . X",
               "gives " + to_string(v) + ", expected " + to_string(s.b[i]));
  }
  const std::size_t rk = rank(X.matrix());
  if (rk != p)
    rep.fail("witness-rank", "X", "rank " + std::to_string(rk) + ", expected " +
                                      std::to_string(p));
  return rep;
}

VerificationReport verify_farkas_ray(const SdpSystem& system, const RatVector& y) {
  VerificationReport rep;
  if (y.size() != system.m()) {
    rep.fail("shape", "y", "length " + std::to_string(y.size()));
    return rep;
  }
  Rational yb;
  for (std::size_t i = 0; i < y.size(); ++i) yb += y[i] * system.b[i];
  if (yb != -1) rep.fail("ray-rhs", "sum y_i b_i", "equals " + to_string(yb));
  if (!is_psd(linear_combination(system.A, y, system.n)))
    rep.fail("ray-psd", "sum y_i A_i", "not psd");
  return rep;
}

VerificationReport check_weak_infeasibility(const StaircaseForm& form) {
  VerificationReport rep = check_staircase(form, true);
  if (!rep.accepted) return rep;
  const SdpSystem& s = form.system;
  const std::size_t m = s.m(), n = s.n, k = form.k;
  if (m != k + 1) {
    rep.fail("weak-structure", "m", "needs m = k + 1");
    return rep;
  }
  const std::size_t t = form.prefix(k + 1);
  if (t >= n) {
    rep.fail("weak-structure", "blockSizes", "no trailing block");
    return rep;
  }
  // Every combination has a zero trailing block, so psd forces the off-diagonal
  // block [0, t) x [t, n) to vanish.
  Matrix g(t * (n - t) + 1, m);
  std::size_t row = 0;
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t b = t; b < n; ++b, ++row)
      for (std::size_t i = 0; i < m; ++i) g(row, i) = s.A[i](a, b);
  for (std::size_t i = 0; i < m; ++i) g(row, i) = s.b[i];
  RatVector rhs(row + 1);
  rhs[row] = -1;
  if (solve(g, rhs))
    rep.fail("weak-obstruction", "A'[0:" + std::to_string(t) + ", " +
                                     std::to_string(t) + ":]",
             "some combination with sum y_i b_i = -1 clears the off-diagonal block");
  return rep;
}

DualityProbe duality_probe(const StaircaseForm& form, std::size_t p,
                           const SymMatrix& C, const ToleranceProfile& tol) {
  DualityProbe out;
  out.C = C;
  const SdpSystem& s = form.system;
  const std::size_t n = s.n;
  if (C.order() != n) throw Error("objective has the wrong order");
  if (p > n) throw Error("rank exceeds the order");
  const std::size_t lead = n - p;
  const SymMatrix c_low = C.principal_block(lead, p);
  if (p == 0 || c_low.is_zero()) {
    out.note = "objective vanishes on the face";
    return out;
  }

  std::vector<RatVector> rows;
  for (const auto& a : s.A) {
    RatVector v;
    for (std::size_t x = 0; x < p; ++x)
      for (std::size_t y = x; y < p; ++y) v.push_back(a(lead + x, lead + y));
    rows.push_back(std::move(v));
  }
  const auto keep = independent_rows(rows, p * (p + 1) / 2);
  const Index pi = static_cast<Index>(p);

  ipm::Settings settings;
  settings.max_iterations = tol.max_iterations;

  ipm::DenseSdp prob;
  prob.C = -to_eigen(c_low);
  prob.b = VectorXd(static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    prob.A.push_back(to_eigen(s.A[keep[j]]).bottomRightCorner(pi, pi));
    prob.b(static_cast<Index>(j)) = s.b[keep[j]].get_d();
  }
  const ipm::Result res = ipm::solve(prob, settings);
  if (usable(res)) {
    out.primal_value = -res.primal_objective;
    out.dual_value = -res.dual_objective;
    out.gap = std::abs(out.primal_value - out.dual_value);
    return out;
  }

  // Recession test: max C . D  s.t.  M_i . D = 0, tr D + slack = 1, D psd.
  ipm::DenseSdp rec;
  const Index N = pi + 1;
  rec.C = MatrixXd::Zero(N, N);
  rec.C.topLeftCorner(pi, pi) = prob.C;
  for (const auto& a : prob.A) {
    MatrixXd e = MatrixXd::Zero(N, N);
    e.topLeftCorner(pi, pi) = a;
    rec.A.push_back(e);
  }
  rec.A.push_back(MatrixXd::Identity(N, N));
  rec.b = VectorXd::Zero(static_cast<Index>(rec.A.size()));
  rec.b(rec.b.size() - 1) = 1.0;
  const ipm::Result rr = ipm::solve(rec, settings);
  const double direction = -rr.primal_objective;
  if (rr.primal_infeasibility < 1e-6 && direction > 1e-6 * std::max(1.0, prob.C.norm())) {
    out.unbounded = true;
    out.primal_value = std::numeric_limits<double>::infinity();
    out.dual_value = std::numeric_limits<double>::infinity();
    out.gap = 0.0;
    out.note = "unbounded: recession direction with C . D = " + std::to_string(direction);
    return out;
  }
  out.numeric_failure = true;
  out.primal_value = -res.primal_objective;
  out.dual_value = -res.dual_objective;
  out.gap = std::abs(out.primal_value - out.dual_value);
  out.note = "interior-point method did not converge";
  return out;
}

}  // namespace spectra
