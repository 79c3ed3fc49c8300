#include "spectra/system.hpp"

namespace spectra {

void SdpSystem::validate() const {
  if (n == 0) throw Error("system order n must be positive");
  if (b.size() != A.size())
    throw Error("right-hand side has " + std::to_string(b.size()) +
                " entries but there are " + std::to_string(A.size()) +
                " matrices");
  for (std::size_t i = 0; i < A.size(); ++i)
    if (A[i].order() != n)
      throw Error("matrix " + std::to_string(i + 1) + " has order " +
                  std::to_string(A[i].order()) + ", expected " +
                  std::to_string(n));
}

FloatSystem to_float(const SdpSystem& s) {
  FloatSystem f;
  f.n = s.n;
  for (const auto& a : s.A) f.A.push_back(to_eigen(a));
  f.b = to_eigen(s.b);
  return f;
}

Transcript Transcript::identity(std::size_t m, std::size_t n) {
  Transcript t;
  t.T = Matrix::identity(m);
  t.V = Matrix::identity(n);
  return t;
}

SdpSystem apply_transcript(const SdpSystem& source, const Transcript& t) {
  const std::size_t m = source.m();
  if (t.T.rows() != m || t.T.cols() != m)
    throw Error("transcript T has the wrong shape");
  if (t.V.rows() != source.n || t.V.cols() != source.n)
    throw Error("transcript V has the wrong shape");
  SdpSystem out;
  out.n = source.n;
  out.b = t.T * source.b;
  const Matrix vt = t.V.transpose();
  for (std::size_t i = 0; i < m; ++i) {
    RatVector row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = t.T(i, j);
    SymMatrix combo = linear_combination(source.A, row, source.n);
    out.A.emplace_back(vt * combo.matrix() * t.V);
  }
  return out;
}

std::size_t StaircaseForm::prefix(std::size_t count) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < count && i < block_sizes.size(); ++i)
    s += block_sizes[i];
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Feasible: return "feasible";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

std::string to_string(Strength s) {
  switch (s) {
    case Strength::Strong: return "strong";
    case Strength::Weak: return "weak";
    case Strength::WeakUnconfirmed: return "weak-unconfirmed";
  }
  return "weak-unconfirmed";
}

std::string to_string(BlockStyle s) {
  return s == BlockStyle::Identity ? "identity" : "positive-diagonal";
}

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

}  // namespace spectra
