#include "spectra/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/certify.hpp"

namespace spectra {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

Rational inner(const RatVector& a, const RatVector& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<SymMatrix> exact_trailing(const SdpSystem& s, std::size_t r) {
  std::vector<SymMatrix> out;
  out.reserve(s.m());
  for (const auto& a : s.A) out.push_back(a.principal_block(r, s.n - r));
  return out;
}

RatVector unit(std::size_t m, std::size_t j, const Rational& value) {
  RatVector y(m);
  y[j] = value;
  return y;
}

// Float RREF of a matrix with independent rows.
MatrixXd float_rref(MatrixXd a) {
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index piv = 0;
    const double best =
        a.col(col).segment(row, a.rows() - row).cwiseAbs().maxCoeff(&piv);
    if (best < 1e-9) continue;
    piv += row;
    a.row(row).swap(a.row(piv));
    a.row(row) /= a(row, col);
    for (Index i = 0; i < a.rows(); ++i)
      if (i != row) a.row(i) -= a(i, col) * a.row(row);
    ++row;
  }
  return a.topRows(row);
}

std::vector<std::size_t> nullity_candidates(const VectorXd& eig, double tol,
                                            bool nonzero) {
  const std::size_t q = static_cast<std::size_t>(eig.size());
  const double scale = eig.cwiseAbs().maxCoeff();
  std::size_t d0 = q;
  if (scale > tol) {
    d0 = 0;
    while (d0 < q && eig(static_cast<Index>(d0)) <= tol * std::max(1.0, scale))
      ++d0;
  }
  std::vector<std::size_t> out;
  auto push = [&](long d) {
    if (d < 0 || d > static_cast<long>(q)) return;
    if (nonzero && d == static_cast<long>(q)) return;
    auto du = static_cast<std::size_t>(d);
    if (std::find(out.begin(), out.end(), du) == out.end()) out.push_back(du);
  };
  const long base = static_cast<long>(d0);
  push(base);
  push(base - 1);
  push(base + 1);
  return out;
}

// Exact y with sum y_i M_i = 0, sum y_i c_i = -1 and y_i = 0 below ell: the
// equations restricted to the face are inconsistent.
std::optional<RatVector> fredholm_ray(const SdpSystem& s, std::size_t ell,
                                      std::size_t r) {
  const std::size_t m = s.m(), q = s.n - r;
  const std::size_t active = m - ell;
  if (active == 0) return std::nullopt;
  const std::size_t entries = q * (q + 1) / 2;
  Matrix g(entries + 1, active);
  for (std::size_t i = ell; i < m; ++i) {
    std::size_t row = 0;
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = a; b < q; ++b) g(row++, i - ell) = s.A[i](r + a, r + b);
    g(entries, i - ell) = s.b[i];
  }
  RatVector rhs(entries + 1);
  rhs[entries] = -1;
  auto sol = solve(g, rhs);
  if (!sol) return std::nullopt;
  RatVector y(m);
  for (std::size_t i = ell; i < m; ++i) y[i] = (*sol)[i - ell];
  return y;
}

}  // namespace

std::size_t ReductionState::r() const {
  std::size_t s = 0;
  for (std::size_t x : block_sizes) s += x;
  return s;
}

ReductionState ReductionState::start(const SdpSystem& source) {
  ReductionState st;
  st.system = source;
  st.transcript = Transcript::identity(source.m(), source.n);
  return st;
}

EroResult apply_eros(const SdpSystem& system, const RatVector& y,
                     std::size_t target) {
  const std::size_t m = system.m();
  if (y.size() != m) throw Error("ray has the wrong length");
  if (target >= m) throw DegenerateComboError("no equation left to replace");
  std::size_t j = target;
  while (j < m && sgn(y[j]) == 0) ++j;
  if (j == m)
    throw DegenerateComboError("ray has no support at or after row " +
                               std::to_string(target + 1));
  EroResult out;
  out.system = system;
  out.system.A[j] = linear_combination(system.A, y, system.n);
  out.system.b[j] = inner(y, system.b);
  out.E = Matrix::identity(m);
  for (std::size_t c = 0; c < m; ++c) out.E(j, c) = y[c];
  if (j != target) {
    std::swap(out.system.A[j], out.system.A[target]);
    std::swap(out.system.b[j], out.system.b[target]);
    for (std::size_t c = 0; c < m; ++c) {
      Rational tmp = out.E(j, c);
      out.E(j, c) = out.E(target, c);
      out.E(target, c) = tmp;
    }
  }
  return out;
}

ReductionState reduction_step(const ReductionState& state, const RatVector& y,
                              RayKind kind,
                              const std::optional<Matrix>& rotation) {
  const SdpSystem& s = state.system;
  const std::size_t n = s.n, r = state.r(), q = n - r, ell = state.ell;
  if (ell >= s.m()) throw ExactValidationError("every equation is already used");
  if (y.size() != s.m()) throw ExactValidationError("ray has the wrong length");

  const Rational yb = inner(y, s.b);
  if (kind == RayKind::Reduction && sgn(yb) != 0)
    throw ExactValidationError("reduction ray has sum y_i b_i = " + to_string(yb));
  if (kind == RayKind::Terminal && yb != -1)
    throw ExactValidationError("terminal ray has sum y_i b_i = " + to_string(yb));

  EroResult eros = apply_eros(s, y, ell);
  const SymMatrix w = eros.system.A[ell].principal_block(r, q);
  if (!is_psd(w)) throw ExactValidationError("lower block is not psd");
  if (kind == RayKind::Reduction && w.is_zero())
    throw ExactValidationError("lower block of a reduction ray must be nonzero");

  Matrix qmat = Matrix::identity(q);
  std::size_t block = 0;
  if (q > 0) {
    if (rotation) {
      if (rotation->rows() == q && rotation->cols() == q) {
        qmat = *rotation;
      } else if (rotation->rows() == n && rotation->cols() == n) {
        Matrix u = Matrix::identity(n);
        u.set_block(r, r, rotation->block(r, r, q, q));
        if (!(u == *rotation))
          throw ExactValidationError("rotation is not of the form diag(I_r, Q)");
        qmat = rotation->block(r, r, q, q);
      } else {
        throw ExactValidationError("rotation has the wrong shape");
      }
      SymMatrix d;
      try {
        d = congruence(w, qmat);
      } catch (const SingularMatrixError&) {
        throw ExactValidationError("rotation is singular");
      }
      while (block < q && sgn(d(block, block)) > 0) ++block;
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
          if (sgn(d(i, j)) != 0 && !(i == j && i < block))
            throw ExactValidationError(
                "rotation does not bring the lower block to diagonal form");
    } else {
      auto bd = psd_block_diagonalize(w);
      qmat = bd.q;
      block = bd.rank;
    }
  }

  ReductionState next;
  next.ell = kind == RayKind::Reduction ? ell + 1 : ell;
  next.block_sizes = state.block_sizes;
  next.block_sizes.push_back(block);
  next.transcript = state.transcript;
  next.transcript.T = eros.E * state.transcript.T;
  next.system = std::move(eros.system);
  if (!(qmat == Matrix::identity(q))) {
    Matrix u = Matrix::identity(n);
    u.set_block(r, r, qmat);
    for (auto& a : next.system.A) a = congruence(a, u);
    next.transcript.V = state.transcript.V * u;
  }
  return next;
}

std::vector<mpz_class> default_denominators() {
  return {mpz_class(100), mpz_class(10000), mpz_class("100000000"),
          mpz_class("1000000000000")};
}

std::optional<RoundedRay> round_ray(const SdpSystem& system, std::size_t ell,
                                    std::size_t r, const VectorXd& y,
                                    const Rational& target, bool nonzero,
                                    const ToleranceProfile& tol,
                                    const std::vector<mpz_class>& denominators) {
  const std::size_t m = system.m(), q = system.n - r;
  if (static_cast<std::size_t>(y.size()) != m || !y.allFinite()) return std::nullopt;
  const auto blocks = exact_trailing(system, r);
  const auto fblocks = trailing_blocks(system, r);

  MatrixXd zf = MatrixXd::Zero(static_cast<Index>(q), static_cast<Index>(q));
  for (std::size_t i = 0; i < m; ++i) zf += y(static_cast<Index>(i)) * fblocks[i];
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(zf);
  const VectorXd eig = q ? VectorXd(es.eigenvalues()) : VectorXd();
  const auto candidates = nullity_candidates(eig, tol.rank, nonzero);

  std::vector<AffineConstraint> base;
  base.push_back({system.b, target});
  for (std::size_t i = 0; i < ell; ++i) base.push_back({unit(m, i, 1), 0});

  for (const auto& den : denominators) {
    RatVector yr(m);
    for (std::size_t i = 0; i < m; ++i) yr[i] = rationalize(y(static_cast<Index>(i)), den);
    // nullopt: plain rounding with no null-space constraints.
    std::vector<std::optional<std::size_t>> tries{std::nullopt};
    for (std::size_t d : candidates) tries.emplace_back(d);
    for (const auto& dd : tries) {
      std::vector<AffineConstraint> cons = base;
      if (dd && *dd > 0) {
        const std::size_t d = *dd;
        MatrixXd basis = es.eigenvectors().leftCols(static_cast<Index>(d));
        MatrixXd rr = float_rref(basis.transpose());
        if (rr.rows() != static_cast<Index>(d)) continue;
        for (Index j = 0; j < rr.rows(); ++j) {
          RatVector v(q);
          for (std::size_t a = 0; a < q; ++a)
            v[a] = rationalize(rr(j, static_cast<Index>(a)), den);
          // (sum_i y_i M_i) v = 0, one equation per coordinate.
          for (std::size_t a = 0; a < q; ++a) {
            RatVector coef(m);
            for (std::size_t i = 0; i < m; ++i) {
              Rational s;
              for (std::size_t b = 0; b < q; ++b) s += blocks[i](a, b) * v[b];
              coef[i] = s;
            }
            cons.push_back({std::move(coef), 0});
          }
        }
      }
      RatVector u;
      try {
        u = project_affine(yr, cons);
      } catch (const InfeasibleProjectionError&) {
        continue;
      }
      SymMatrix z = linear_combination(blocks, u, q);
      if (nonzero && z.is_zero()) continue;
      if (!is_psd(z)) continue;
      if (inner(u, system.b) != target) continue;
      return RoundedRay{std::move(u), den};
    }
  }
  return std::nullopt;
}

SymMatrix max_rank_witness(const SdpSystem& system, std::size_t r,
                           const MatrixXd& X, double x0, const MatrixXd& Xs,
                           double x0s,
                           const std::vector<mpz_class>& denominators) {
  const std::size_t n = system.n, q = n - r, m = system.m();
  const Index qi = static_cast<Index>(q);
  const auto blocks = exact_trailing(system, r);

  std::vector<AffineConstraint> cons;
  for (std::size_t i = 0; i < m; ++i) {
    RatVector coef;
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = a; b < q; ++b)
        coef.push_back(a == b ? blocks[i](a, a) : Rational(2 * blocks[i](a, b)));
    cons.push_back({std::move(coef), system.b[i]});
  }

  const MatrixXd xl = X.bottomRightCorner(qi, qi);
  const MatrixXd xsl = Xs.bottomRightCorner(qi, qi);
  double eps = 0.25;
  for (int halving = 0; halving <= 60; ++halving, eps /= 2) {
    const double scale = x0 + eps * x0s;
    if (!(scale > 0)) continue;
    const MatrixXd yf = (xl + eps * xsl) / scale;
    if (!yf.allFinite()) continue;
    for (const auto& den : denominators) {
      RatVector v;
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a; b < q; ++b)
          v.push_back(rationalize(yf(static_cast<Index>(a), static_cast<Index>(b)), den));
      RatVector u;
      try {
        u = project_affine(v, cons);
      } catch (const InfeasibleProjectionError&) {
        throw ExactValidationError("equations restricted to the face are inconsistent");
      }
      SymMatrix lower(q);
      std::size_t k = 0;
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a; b < q; ++b) lower.set(a, b, u[k++]);
      if (!is_pd(lower)) continue;
      Matrix full(n, n);
      full.set_block(r, r, lower.matrix());
      SymMatrix out(full);
      for (std::size_t i = 0; i < m; ++i)
        if (dot(system.A[i], out) != system.b[i])
          throw ExactValidationError("projected witness violates an equation");
      return out;
    }
  }
  throw ExactValidationError("no exact positive definite witness found");
}

void normalize_blocks(StaircaseForm& form, Transcript& transcript) {
  const std::size_t n = form.system.n;
  VectorXd scale = VectorXd::Ones(static_cast<Index>(n));
  std::size_t start = 0;
  for (std::size_t i = 0; i < form.block_sizes.size(); ++i) {
    for (std::size_t j = start; j < start + form.block_sizes[i]; ++j)
      scale(static_cast<Index>(j)) = 1.0 / std::sqrt(form.system.A[i](j, j).get_d());
    start += form.block_sizes[i];
  }
  const MatrixXd d = scale.asDiagonal();
  FloatSystem f = to_float(form.system);
  for (auto& a : f.A) a = d * a * d;
  form.normalized = std::move(f);
  transcript.V_float = to_eigen(transcript.V) * d;
  transcript.mode = Mode::Float;
}

StrengthResult classify_strength(const SdpSystem& system,
                                 const Certificate& cert,
                                 const ToleranceProfile& tol,
                                 const std::vector<mpz_class>& denominators) {
  StrengthResult out;
  if (cert.verdict != Verdict::Infeasible)
    throw Error("strength is defined only for infeasible certificates");
  const std::size_t m = system.m();
  if (cert.staircase.k == 0) {
    RatVector y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = cert.transcript.T(0, j);
    if (verify_farkas_ray(system, y).accepted) {
      out.strength = Strength::Strong;
      out.ray = std::move(y);
      out.reason = "k = 0 certificate";
      return out;
    }
  }
  if (check_weak_infeasibility(cert.staircase).accepted) {
    out.strength = Strength::Weak;
    out.reason = "exact: no combination with sum y_i b_i = -1 is psd";
    return out;
  }
  SubproblemOutcome f = solve_farkas(system, tol);
  if (f.tag == OutcomeTag::DualRay || f.tag == OutcomeTag::NumericFailure) {
    auto rr = round_ray(system, 0, 0, f.y, Rational(-1), false, tol, denominators);
    if (rr && verify_farkas_ray(system, rr->y).accepted) {
      out.strength = Strength::Strong;
      out.ray = std::move(rr->y);
      out.reason = "verified Farkas ray";
      return out;
    }
  }
  if (f.tag == OutcomeTag::NoRay || f.tag == OutcomeTag::StrictlyFeasible) {
    out.strength = Strength::Weak;
    out.reason = "solver found no Farkas ray (" + to_string(f.tag) + ")";
    return out;
  }
  out.strength = Strength::WeakUnconfirmed;
  out.reason = "Farkas search inconclusive (" + to_string(f.tag) + ")";
  return out;
}

namespace {

class Converter {
 public:
  Converter(const SdpSystem& source, const ConvertOptions& opts)
      : source_(source), opts_(opts), st_(ReductionState::start(source)) {}

  Certificate run() {
    std::size_t hint = 0;
    const std::size_t limit = source_.m() + source_.n + opts_.hints.size() + 2;
    for (std::size_t guard = 0; guard < limit; ++guard) {
      if (hint < opts_.hints.size()) {
        if (try_hint(opts_.hints[hint], hint)) {
          ++hint;
          if (done_) return conclude();
          continue;
        }
        hint = opts_.hints.size();
      }
      step();
      if (done_) return conclude();
    }
    return undecided("iteration limit reached");
  }

 private:
  const SdpSystem& source_;
  const ConvertOptions& opts_;
  ReductionState st_;
  Certificate cert_;
  bool done_ = false;
  std::string undecided_reason_;

  Certificate conclude() {
    return undecided_reason_.empty() ? finish() : undecided(undecided_reason_);
  }

  IterationLog log(std::string phase) const {
    IterationLog l;
    l.ell = st_.ell;
    l.r = st_.r();
    l.phase = std::move(phase);
    return l;
  }

  void record(IterationLog l, const SubproblemOutcome* o = nullptr) {
    if (o) {
      l.solver_iterations = o->diagnostics.iterations;
      l.objective = o->diagnostics.objective;
      l.primal_residual = o->diagnostics.primal_residual;
      l.dual_residual = o->diagnostics.dual_residual;
    }
    cert_.diagnostics.iterations.push_back(std::move(l));
  }

  bool try_hint(const IterationHint& h, std::size_t index) {
    IterationLog l = log("hint");
    try {
      if (h.y.size() != st_.system.m()) throw ExactValidationError("wrong length");
      const Rational yb = inner(h.y, st_.system.b);
      if (sgn(yb) == 0) {
        st_ = reduction_step(st_, h.y, RayKind::Reduction, h.rotation);
        l.outcome = "reduction";
      } else if (sgn(yb) < 0) {
        RatVector y = h.y;
        for (auto& v : y) v /= -yb;
        infeasible(reduction_step(st_, y, RayKind::Terminal, h.rotation));
        l.outcome = "terminal";
      } else {
        throw ExactValidationError("sum y_i b_i is positive");
      }
      record(std::move(l));
      return true;
    } catch (const Error& e) {
      cert_.diagnostics.messages.push_back("hint " + std::to_string(index + 1) +
                                           " rejected: " + e.what());
      return false;
    }
  }

  void infeasible(ReductionState terminal) {
    cert_.verdict = Verdict::Infeasible;
    cert_.staircase.k = terminal.ell;
    cert_.staircase.block_sizes = terminal.block_sizes;
    st_ = std::move(terminal);
    done_ = true;
  }

  void feasible(SymMatrix x) {
    cert_.verdict = Verdict::Feasible;
    cert_.staircase.k = st_.ell;
    cert_.staircase.block_sizes = st_.block_sizes;
    cert_.p = source_.n - st_.r();
    cert_.X = std::move(x);
    done_ = true;
  }

  Certificate undecided(std::string why) {
    cert_.verdict = Verdict::Undecided;
    cert_.diagnostics.messages.push_back(std::move(why));
    cert_.staircase.system = st_.system;
    cert_.staircase.k = st_.ell;
    cert_.staircase.block_sizes = st_.block_sizes;
    cert_.transcript = st_.transcript;
    return std::move(cert_);
  }

  Certificate finish() {
    cert_.staircase.system = st_.system;
    cert_.staircase.style = BlockStyle::PositiveDiagonal;
    cert_.transcript = st_.transcript;
    if (cert_.verdict == Verdict::Feasible) {
      const Matrix& v = cert_.transcript.V;
      cert_.X_source = SymMatrix(v * cert_.X->matrix() * v.transpose());
    }
    if (cert_.verdict == Verdict::Infeasible && opts_.classify) {
      auto s = classify_strength(source_, cert_, opts_.tol, opts_.denominators);
      cert_.strength = s.strength;
      cert_.farkas_ray = s.ray;
      cert_.diagnostics.messages.push_back("strength: " + s.reason);
    }
    if (opts_.mode == Mode::Float) normalize_blocks(cert_.staircase, cert_.transcript);
    return std::move(cert_);
  }

  SubproblemOutcome solve_with_retry(bool aux) {
    const FaceDescriptor face{st_.system.n, st_.r()};
    ToleranceProfile tol = opts_.tol;
    SubproblemOutcome o = aux ? solve_aux(st_.system, face, tol)
                              : solve_hom(st_.system, face, tol);
    if (o.tag == OutcomeTag::NumericFailure) {
      tol.max_iterations *= 2;
      SubproblemOutcome again = aux ? solve_aux(st_.system, face, tol)
                                    : solve_hom(st_.system, face, tol);
      if (again.tag != OutcomeTag::NumericFailure) return again;
    }
    return o;
  }

  bool apply_rounded(const SubproblemOutcome& o, RayKind kind, IterationLog l) {
    const bool terminal = kind == RayKind::Terminal;
    auto rr = round_ray(st_.system, st_.ell, st_.r(), o.y,
                        terminal ? Rational(-1) : Rational(0), !terminal,
                        opts_.tol, opts_.denominators);
    if (!rr) return false;
    try {
      ReductionState next = reduction_step(st_, rr->y, kind);
      l.denominator = rr->denominator.get_str();
      l.outcome = terminal ? "terminal" : "reduction";
      record(std::move(l), &o);
      if (terminal) {
        infeasible(std::move(next));
      } else {
        st_ = std::move(next);
      }
      return true;
    } catch (const ExactValidationError& e) {
      cert_.diagnostics.messages.push_back(e.what());
      return false;
    }
  }

  void step() {
    const std::size_t n = st_.system.n, m = st_.system.m();
    const std::size_t r = st_.r(), q = n - r, ell = st_.ell;

    if (ell == m) {
      Matrix x(n, n);
      x.set_block(r, r, Matrix::identity(q));
      IterationLog l = log("exact");
      l.outcome = "no equations left";
      record(std::move(l));
      feasible(SymMatrix(x));
      return;
    }
    if (auto y = fredholm_ray(st_.system, ell, r)) {
      IterationLog l = log("exact-linear");
      l.outcome = "terminal";
      record(std::move(l));
      infeasible(reduction_step(st_, *y, RayKind::Terminal));
      return;
    }
    if (q == 0) {
      IterationLog l = log("exact");
      l.outcome = "only X = 0 remains";
      record(std::move(l));
      feasible(SymMatrix(n));
      return;
    }
    if (q == 1) {
      scalar_step();
      return;
    }

    std::optional<SubproblemOutcome> aux;
    const bool endgame = ell + 1 == m && sgn(st_.system.b[ell]) != 0;
    if (!endgame) {
      aux = solve_with_retry(true);
      IterationLog l = log("aux");
      if (aux->tag != OutcomeTag::StrictlyFeasible) {
        if (apply_rounded(*aux, RayKind::Reduction, l)) return;
        if (!(aux->diagnostics.objective > opts_.tol.pd)) {
          l.outcome = "ray could not be made exact";
          record(std::move(l), &*aux);
          done_ = true;
          undecided_reason_ = "no exact reduction ray at ell = " +
                              std::to_string(ell) + " (" + to_string(aux->tag) + ")";
          return;
        }
      }
      l.outcome = "strictly feasible";
      record(std::move(l), &*aux);
    }

    SubproblemOutcome hom = solve_with_retry(false);
    IterationLog l = log(endgame ? "hom-endgame" : "hom");
    if (hom.tag == OutcomeTag::StrictlyFeasible) {
      const bool have_aux = aux && aux->tag == OutcomeTag::StrictlyFeasible;
      try {
        SymMatrix x = max_rank_witness(st_.system, r, hom.X, hom.x0,
                                       have_aux ? aux->X : hom.X,
                                       have_aux ? aux->x0 : hom.x0,
                                       opts_.denominators);
        l.outcome = "feasible";
        record(std::move(l), &hom);
        feasible(std::move(x));
      } catch (const ExactValidationError& e) {
        l.outcome = e.what();
        record(std::move(l), &hom);
        done_ = true;
        undecided_reason_ = std::string("no exact witness: ") + e.what();
      }
      return;
    }
    if (hom.tag == OutcomeTag::NoRay) {
      if (apply_rounded(hom, RayKind::Reduction, l)) return;
    } else if (apply_rounded(hom, RayKind::Terminal, l)) {
      return;
    }
    l.outcome = "ray could not be made exact";
    record(std::move(l), &hom);
    done_ = true;
    undecided_reason_ = "no exact terminal ray at ell = " + std::to_string(ell) +
                        " (" + to_string(hom.tag) + ")";
  }

  // Order-1 face: the equations read M_i x = c_i with x >= 0.
  void scalar_step() {
    const std::size_t n = st_.system.n, m = st_.system.m(), last = n - 1;
    IterationLog l = log("exact-scalar");
    std::optional<std::size_t> j;
    for (std::size_t i = st_.ell; i < m && !j; ++i)
      if (sgn(st_.system.A[i](last, last)) != 0) j = i;
    Matrix x(n, n);
    if (!j) {
      x(last, last) = 1;
      l.outcome = "feasible";
      record(std::move(l));
      feasible(SymMatrix(x));
      return;
    }
    const Rational mj = st_.system.A[*j](last, last), cj = st_.system.b[*j];
    const Rational xs = cj / mj;
    if (sgn(xs) > 0) {
      x(last, last) = xs;
      l.outcome = "feasible";
      record(std::move(l));
      feasible(SymMatrix(x));
    } else if (sgn(xs) < 0) {
      l.outcome = "terminal";
      record(std::move(l));
      infeasible(reduction_step(st_, unit(m, *j, -1 / cj), RayKind::Terminal));
    } else {
      l.outcome = "reduction";
      record(std::move(l));
      st_ = reduction_step(st_, unit(m, *j, 1 / mj), RayKind::Reduction);
    }
  }
};

}  // namespace

Certificate convert(const SdpSystem& system, const ConvertOptions& opts) {
  system.validate();
  Converter conv(system, opts);
  return conv.run();
}

}  // namespace spectra
