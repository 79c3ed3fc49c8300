#include "spectra/ratmat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace spectra {

std::string to_string(const Rational& x) { return x.get_str(); }

namespace {

mpz_class pow10(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational");

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class d{std::string(den), 10};
    if (d == 0)
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpz_class nz{std::string(num), 10};
    Rational r(nz, d);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }

  // Decimal with optional exponent.
  std::string_view mantissa = body;
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = body.substr(0, e);
    auto exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    auto int_part = mantissa.substr(0, dot);
    auto frac_part = mantissa.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty()))
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    frac_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(mantissa))
      throw ParseError("malformed number '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  Rational r{mpz_class(digits, 10)};
  long shift = exponent - frac_digits;
  if (shift > 0) r *= Rational(pow10(static_cast<unsigned long>(shift)));
  if (shift < 0) r /= Rational(pow10(static_cast<unsigned long>(-shift)));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error("ragged matrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::diagonal(const RatVector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error("block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw Error("block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Rational& x) { return sgn(x) == 0; });
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("shape mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("shape mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(const Rational& s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("shape mismatch in *");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RatVector operator*(const Matrix& a, const RatVector& v) {
  if (a.cols() != v.size()) throw Error("shape mismatch in matrix*vector");
  RatVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (!m_.is_symmetric()) throw Error("matrix is not symmetric");
}

void SymMatrix::set(std::size_t i, std::size_t j, const Rational& v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator*(const Rational& s, SymMatrix a) { return a *= s; }

Rational dot(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw Error("order mismatch in dot");
  Rational s;
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < a.order(); ++j) s += a(i, j) * b(i, j);
  return s;
}

SymMatrix linear_combination(const std::vector<SymMatrix>& mats,
                             const RatVector& w, std::size_t n) {
  if (mats.size() != w.size()) throw Error("weight count mismatch");
  Matrix acc(n, n);
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (sgn(w[k]) == 0) continue;
    const Matrix& m = mats[k].matrix();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc(i, j) += w[k] * m(i, j);
  }
  return SymMatrix(std::move(acc));
}

// ---------------------------------------------------------------------------
// Factorizations

Matrix LdltFactorization::permutation_matrix() const {
  const std::size_t n = permutation.size();
  Matrix p(n, n);
  for (std::size_t k = 0; k < n; ++k) p(permutation[k], k) = 1;
  return p;
}

std::size_t LdltFactorization::rank() const {
  return static_cast<std::size_t>(
      std::count_if(diagonal.begin(), diagonal.end(),
                    [](const Rational& d) { return sgn(d) != 0; }));
}

namespace {

// Returns the factorization, or the failing pivot (original index) and a
// reason when the matrix is not psd.
struct LdltAttempt {
  std::optional<LdltFactorization> factorization;
  std::size_t failed_pivot = 0;
  std::string reason;
};

LdltAttempt try_ldlt(const SymMatrix& a) {
  const std::size_t n = a.order();
  Matrix work = a.matrix();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Matrix lower = Matrix::identity(n);
  RatVector diag(n);

  auto swap_sym = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(work(i, c), work(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(work(r, i), work(r, j));
    for (std::size_t c = 0; c < i; ++c) std::swap(lower(i, c), lower(j, c));
    std::swap(perm[i], perm[j]);
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::optional<std::size_t> pivot;
    for (std::size_t i = k; i < n; ++i) {
      int s = sgn(work(i, i));
      if (s < 0) {
        return {std::nullopt, perm[i],
                "negative pivot " + to_string(work(i, i))};
      }
      if (s > 0 && !pivot) pivot = i;
    }
    if (!pivot) {
      // Remaining diagonal is zero; a psd remainder must vanish entirely.
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (sgn(work(i, j)) != 0)
            return {std::nullopt, perm[i],
                    "zero pivot with nonzero off-diagonal entry"};
      break;
    }
    swap_sym(k, *pivot);
    const Rational d = work(k, k);
    diag[k] = d;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(work(i, k)) == 0) continue;
      Rational l = work(i, k) / d;
      lower(i, k) = l;
      for (std::size_t j = k + 1; j <= i; ++j) {
        work(i, j) -= l * work(k, j);
        work(j, i) = work(i, j);
      }
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      work(i, k) = 0;
      work(k, i) = 0;
    }
  }
  return {LdltFactorization{std::move(perm), std::move(lower), std::move(diag)},
          0, {}};
}

// Integer-scaled copy of a for fraction-free elimination.
std::vector<std::vector<mpz_class>> integer_rows(const Matrix& a) {
  std::vector<std::vector<mpz_class>> rows(a.rows(),
                                           std::vector<mpz_class>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mpz_class lcm = 1;
    for (std::size_t j = 0; j < a.cols(); ++j)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j)
      rows[i][j] = a(i, j).get_num() * (lcm / a(i, j).get_den());
  }
  return rows;
}

// Bareiss elimination in place; returns the rank and the sign flips of the
// row exchanges performed. After elimination rows[rank-1][last pivot col] is
// the leading principal determinant when the matrix is square and full rank.
std::size_t bareiss(std::vector<std::vector<mpz_class>>& rows,
                    std::size_t cols, int& sign) {
  const std::size_t m = rows.size();
  sign = 1;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m; ++c) {
    std::size_t p = r;
    while (p < m && rows[p][c] == 0) ++p;
    if (p == m) continue;
    if (p != r) {
      std::swap(rows[p], rows[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        rows[i][j] = rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j];
        mpz_divexact(rows[i][j].get_mpz_t(), rows[i][j].get_mpz_t(),
                     prev.get_mpz_t());
      }
      rows[i][c] = 0;
    }
    prev = rows[r][c];
    ++r;
  }
  return r;
}

}  // namespace

LdltFactorization ldlt(const SymMatrix& a) {
  auto attempt = try_ldlt(a);
  if (!attempt.factorization)
    throw IndefinitePivotError(
        attempt.failed_pivot,
        "not positive semidefinite at pivot " +
            std::to_string(attempt.failed_pivot) + ": " + attempt.reason);
  return std::move(*attempt.factorization);
}

bool is_psd(const SymMatrix& a) { return try_ldlt(a).factorization.has_value(); }

bool is_pd(const SymMatrix& a) {
  auto attempt = try_ldlt(a);
  return attempt.factorization && attempt.factorization->rank() == a.order();
}

RatVector characteristic_polynomial(const Matrix& a) {
  if (!a.is_square()) throw Error("characteristic polynomial needs a square matrix");
  const std::size_t n = a.rows();
  RatVector c(n + 1);
  c[n] = 1;
  Matrix m(n, n);
  const Matrix id = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    Matrix am = a * m;
    Rational tr;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

Inertia inertia(const SymMatrix& a) {
  const RatVector c = characteristic_polynomial(a.matrix());
  const std::size_t n = a.order();
  Inertia result;
  std::size_t low = 0;
  while (low < n && sgn(c[low]) == 0) ++low;
  result.zero = low;
  auto sign_changes = [&](bool flip_odd) {
    std::size_t changes = 0;
    int last = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      int s = sgn(c[i]);
      if (s == 0) continue;
      if (flip_odd && (i % 2 == 1)) s = -s;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  };
  result.positive = sign_changes(false);
  result.negative = sign_changes(true);
  return result;
}

std::size_t rank(const Matrix& a) {
  auto rows = integer_rows(a);
  int sign = 1;
  return bareiss(rows, a.cols(), sign);
}

Rational determinant(const Matrix& a) {
  if (!a.is_square()) throw Error("determinant needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Rational scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class lcm = 1;
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a(i, j).get_den_mpz_t());
    scale /= Rational(lcm);
  }
  auto rows = integer_rows(a);
  int sign = 1;
  if (bareiss(rows, n, sign) < n) return 0;
  Rational det(rows[n - 1][n - 1]);
  return det * scale * sign;
}

std::pair<Matrix, std::vector<std::size_t>> rref(const Matrix& a) {
  Matrix r = a;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < r.cols() && row < r.rows(); ++c) {
    std::size_t p = row;
    while (p < r.rows() && sgn(r(p, c)) == 0) ++p;
    if (p == r.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(p, j), r(row, j));
    const Rational inv = 1 / r(row, c);
    for (std::size_t j = c; j < r.cols(); ++j) r(row, j) *= inv;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == row || sgn(r(i, c)) == 0) continue;
      const Rational f = r(i, c);
      for (std::size_t j = c; j < r.cols(); ++j) r(i, j) -= f * r(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(r), std::move(pivots)};
}

Matrix nullspace(const Matrix& a) {
  auto [r, pivots] = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix basis(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      basis(pivots[i], k) = -r(i, free_cols[k]);
  }
  return basis;
}

std::optional<RatVector> solve(const Matrix& a, const RatVector& b) {
  if (a.rows() != b.size()) throw Error("shape mismatch in solve");
  Matrix aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < b.size(); ++i) aug(i, a.cols()) = b[i];
  auto [r, pivots] = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  RatVector x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r(i, a.cols());
  return x;
}

Matrix inverse(const Matrix& a) {
  if (!a.is_square()) throw SingularMatrixError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix::identity(n));
  auto [r, pivots] = rref(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
    throw SingularMatrixError("matrix is singular");
  return r.block(0, n, n, n);
}

SymMatrix congruence(const SymMatrix& a, const Matrix& v) {
  if (!v.is_square() || v.rows() != a.order())
    throw SingularMatrixError("rotation must be square of the same order");
  if (sgn(determinant(v)) == 0)
    throw SingularMatrixError("rotation matrix is singular");
  return SymMatrix(v.transpose() * a.matrix() * v);
}

BlockDiagonalization psd_block_diagonalize(const SymMatrix& w) {
  LdltFactorization f;
  try {
    f = ldlt(w);
  } catch (const IndefinitePivotError& e) {
    throw NotPsdError(e.what());
  }
  // P^T W P = L D L^T  =>  (P L^{-T})^T W (P L^{-T}) = D.
  Matrix q = f.permutation_matrix() * inverse(f.unit_lower).transpose();
  return {std::move(q), f.rank(), f.diagonal};
}

Rational rationalize(const Rational& x, const mpz_class& max_denominator) {
  if (max_denominator < 1) throw Error("max denominator must be positive");
  if (x.get_den() <= max_denominator) return x;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class rem = n - a * d;
    n = d;
    d = rem;
  }
  mpz_class k = (max_denominator - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  return abs(bound2 - x) <= abs(bound1 - x) ? bound2 : bound1;
}

Rational rationalize(double x, const mpz_class& max_denominator) {
  if (!std::isfinite(x)) throw Error("cannot rationalize a non-finite value");
  return rationalize(Rational(x), max_denominator);
}

RatVector project_affine(const RatVector& v,
                         const std::vector<AffineConstraint>& constraints) {
  const std::size_t d = v.size();
  // Keep an independent, consistent subset of the constraint rows.
  Matrix aug(constraints.size(), d + 1);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].a.size() != d)
      throw Error("constraint dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) aug(i, j) = constraints[i].a[j];
    aug(i, d) = constraints[i].c;
  }
  auto [r, pivots] = rref(aug);
  if (!pivots.empty() && pivots.back() == d)
    throw InfeasibleProjectionError("affine constraints are inconsistent");
  const std::size_t k = pivots.size();
  if (k == 0) return v;
  Matrix a = r.block(0, 0, k, d);
  RatVector c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = r(i, d);

  // u = v - A^T (A A^T)^{-1} (A v - c)
  RatVector resid = a * v;
  for (std::size_t i = 0; i < k; ++i) resid[i] -= c[i];
  Matrix gram = a * a.transpose();
  auto lambda = solve(gram, resid);
  if (!lambda) throw InfeasibleProjectionError("singular projection system");
  RatVector u = v;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) u[j] -= a(i, j) * (*lambda)[i];
  return u;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).get_d();
  return m;
}

Eigen::VectorXd to_eigen(const RatVector& v) {
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r(i) = v[i].get_d();
  return r;
}

}  // namespace spectra
