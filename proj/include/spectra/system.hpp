#pragma once

// Core data model: a semidefinite system A_i . X = b_i, X psd, together with
// the reformulation transcript, the staircase form, and the certificate the
// conversion pipeline emits.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spectra/ratmat.hpp"

namespace spectra {

struct SdpSystem {
  std::size_t n = 0;
  std::vector<SymMatrix> A;
  RatVector b;

  std::size_t m() const { return A.size(); }
  /// Throws Error unless every A_i has order n and |b| == m.
  void validate() const;
  friend bool operator==(const SdpSystem&, const SdpSystem&) = default;
};

/// Float copy of a system (used for identity-normalized float-mode forms).
struct FloatSystem {
  std::size_t n = 0;
  std::vector<Eigen::MatrixXd> A;
  Eigen::VectorXd b;
};

FloatSystem to_float(const SdpSystem& s);

enum class Mode { Exact, Float };

/// Reformulation record: A'_i = V^T (sum_j T_ij A_j) V and b' = T b.
struct Transcript {
  Mode mode = Mode::Exact;
  Matrix T;                        // m x m, invertible
  Matrix V;                        // n x n exact rotation
  std::optional<Eigen::MatrixXd> V_float;  // float mode rotation

  static Transcript identity(std::size_t m, std::size_t n);
};

/// Applies a transcript to a source system (exact rotation).
SdpSystem apply_transcript(const SdpSystem& source, const Transcript& t);

enum class BlockStyle { Identity, PositiveDiagonal };

struct StaircaseForm {
  SdpSystem system;
  std::size_t k = 0;
  // r_1..r_k, plus r_{k+1} for the infeasible variant.
  std::vector<std::size_t> block_sizes;
  BlockStyle style = BlockStyle::PositiveDiagonal;
  // Float mode only: the form congruence-scaled to identity blocks.
  std::optional<FloatSystem> normalized;

  bool infeasible_variant() const { return block_sizes.size() == k + 1; }
  /// r_1 + ... + r_count.
  std::size_t prefix(std::size_t count) const;
};

enum class Verdict { Infeasible, Feasible, Undecided };
enum class Strength { Strong, Weak, WeakUnconfirmed };

std::string to_string(Verdict v);
std::string to_string(Strength s);
std::string to_string(BlockStyle s);
std::string to_string(Mode m);

struct IterationLog {
  std::size_t ell = 0;
  std::size_t r = 0;
  std::string phase;    // "aux", "hom", "exact-scalar", "hint", ...
  std::string outcome;  // human-readable result
  int solver_iterations = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::string denominator;  // rounding denominator that succeeded, if any
};

struct Diagnostics {
  std::vector<IterationLog> iterations;
  std::vector<std::string> messages;
};

struct Certificate {
  Verdict verdict = Verdict::Undecided;
  StaircaseForm staircase;
  Transcript transcript;
  // Infeasible only.
  Strength strength = Strength::WeakUnconfirmed;
  std::optional<RatVector> farkas_ray;  // exact (1.5)-type ray when known
  // Feasible only: witness in the reformulated coordinates and in the source
  // coordinates (X_source = V X V^T).
  std::size_t p = 0;
  std::optional<SymMatrix> X;
  std::optional<SymMatrix> X_source;
  Diagnostics diagnostics;
};

}  // namespace spectra
