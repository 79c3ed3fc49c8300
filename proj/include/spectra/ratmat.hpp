#pragma once

// Exact rational dense linear algebra.
//
// Everything here is exact over Q (GMP rationals). Matrices are dense and
// row-major; the instances this library targets are small (n <= ~50).

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spectra {

/// Arbitrary-precision rational; GMP keeps it canonical (lowest terms,
/// positive denominator) after every operation.
using Rational = mpq_class;
using RatVector = std::vector<Rational>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndefinitePivotError : public Error {
 public:
  IndefinitePivotError(std::size_t pivot, const std::string& what)
      : Error(what), pivot_(pivot) {}
  /// Index (in the original ordering) of the offending diagonal entry.
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

class InfeasibleProjectionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& x);
// Accepts "p", "p/q", and decimals with optional exponent ("-1.25e-3").
// Decimals convert losslessly to p/10^k.
Rational parse_rational(std::string_view text);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n, n); }
  static Matrix diagonal(const RatVector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  bool is_zero() const;
  bool is_symmetric() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Rational& s);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(const Rational& s, Matrix a);
RatVector operator*(const Matrix& a, const RatVector& v);

/// Symmetric rational matrix; symmetry is checked on construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
      : SymMatrix(Matrix(rows)) {}

  static SymMatrix identity(std::size_t n) {
    return SymMatrix(Matrix::identity(n));
  }
  static SymMatrix diagonal(const RatVector& d) {
    return SymMatrix(Matrix::diagonal(d));
  }

  std::size_t order() const { return m_.rows(); }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return m_(i, j);
  }
  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const Rational& v);

  const Matrix& matrix() const { return m_; }
  bool is_zero() const { return m_.is_zero(); }
  SymMatrix principal_block(std::size_t start, std::size_t size) const {
    return SymMatrix(m_.block(start, start, size, size));
  }

  SymMatrix& operator+=(const SymMatrix& o) {
    m_ += o.m_;
    return *this;
  }
  SymMatrix& operator*=(const Rational& s) {
    m_ *= s;
    return *this;
  }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(const Rational& s, SymMatrix a);

/// Trace inner product A . B = tr(A B).
Rational dot(const SymMatrix& a, const SymMatrix& b);

/// sum_i w[i] * mats[i]; all of order n.
SymMatrix linear_combination(const std::vector<SymMatrix>& mats,
                             const RatVector& w, std::size_t n);

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// P^T A P = L D L^T with P a permutation and L unit lower triangular.
/// permutation[k] is the original index placed at position k.
struct LdltFactorization {
  std::vector<std::size_t> permutation;
  Matrix unit_lower;
  RatVector diagonal;

  Matrix permutation_matrix() const;
  /// Number of nonzero pivots.
  std::size_t rank() const;
};

/// Exact LDL^T on the psd path: symmetric pivoting to the first positive
/// diagonal entry. Throws IndefinitePivotError on a negative pivot, or on an
/// all-zero remaining diagonal whose remaining block is not zero.
LdltFactorization ldlt(const SymMatrix& a);

bool is_psd(const SymMatrix& a);
bool is_pd(const SymMatrix& a);

/// Exact inertia of any symmetric matrix (Descartes' rule on the
/// characteristic polynomial, which is real-rooted).
Inertia inertia(const SymMatrix& a);

/// Coefficients c[0..n] of det(x I - A), c[n] == 1.
RatVector characteristic_polynomial(const Matrix& a);

std::size_t rank(const Matrix& a);
Rational determinant(const Matrix& a);
Matrix inverse(const Matrix& a);  // throws SingularMatrixError

/// Reduced row echelon form; pivot columns returned alongside.
std::pair<Matrix, std::vector<std::size_t>> rref(const Matrix& a);

/// Basis (as columns) of the right null space of a.
Matrix nullspace(const Matrix& a);

/// Some solution of a x = b, or nullopt when inconsistent.
std::optional<RatVector> solve(const Matrix& a, const RatVector& b);

/// V^T A V. Throws SingularMatrixError unless V is square and invertible.
SymMatrix congruence(const SymMatrix& a, const Matrix& v);

struct BlockDiagonalization {
  Matrix q;            // invertible
  std::size_t rank;    // number of positive diagonal entries
  RatVector diagonal;  // Q^T W Q = diag(diagonal)
};

/// For psd W: Q with Q^T W Q = diag(d_1..d_r, 0..0), d_j > 0.
/// Throws NotPsdError otherwise.
BlockDiagonalization psd_block_diagonalize(const SymMatrix& w);

/// Best rational approximation with denominator <= max_denominator: no p/q
/// with q <= max_denominator is strictly closer to x.
Rational rationalize(double x, const mpz_class& max_denominator);
Rational rationalize(const Rational& x, const mpz_class& max_denominator);

struct AffineConstraint {
  RatVector a;
  Rational c;
};

/// Exact orthogonal projection of v onto {u : a^T u = c for every constraint}.
/// Redundant consistent rows are dropped; inconsistent rows throw
/// InfeasibleProjectionError.
RatVector project_affine(const RatVector& v,
                         const std::vector<AffineConstraint>& constraints);

Eigen::MatrixXd to_eigen(const Matrix& a);
inline Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  return to_eigen(a.matrix());
}
Eigen::VectorXd to_eigen(const RatVector& v);

}  // namespace spectra
