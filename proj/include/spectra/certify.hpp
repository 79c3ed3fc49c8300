#pragma once

// Independent certificate checks. Nothing here consults a conversion run:
// the reformulated system, transcript, block sizes and witness are the whole
// certificate.

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spectra/sdpsolve.hpp"
#include "spectra/system.hpp"

namespace spectra {

struct CheckFailure {
  std::string check;     // e.g. "b-zero", "block-positive"
  std::string location;  // e.g. "A'2[0,3]"
  std::string detail;    // offending values
};

struct VerificationReport {
  bool accepted = true;
  std::vector<CheckFailure> failures;
  bool checked_exactly = true;
  std::string block_style;  // style actually observed, when relevant

  void fail(std::string check, std::string location, std::string detail);
  /// Appends other's failures; accepted only if both are.
  void merge(const VerificationReport& other);
};

/// Exact shape check. Infeasible variant: b'_{k+1} = -1 and block r_{k+1}
/// (which may be 0) on row k+1.
VerificationReport check_staircase(const StaircaseForm& form,
                                   bool infeasible_variant);

/// Replays the zero-forcing argument: constraints 1..k kill the leading
/// s_k rows and columns of any feasible X, so constraint k+1 reads
/// (psd block) . X = -1.
VerificationReport replay_infeasibility(const StaircaseForm& form);

/// A'_i = V^T (sum_j T_ij A_j) V and b' = T b with T, V invertible. Exact
/// unless the transcript is float mode, where V_float is checked within tol.
VerificationReport verify_transcript(const SdpSystem& source,
                                     const SdpSystem& result,
                                     const Transcript& transcript,
                                     double tol = 1e-9);

/// X feasible, psd, rank p, and a feasible-variant staircase with
/// sum r_i = n - p.
VerificationReport check_max_rank(const StaircaseForm& form, const SymMatrix& X,
                                  std::size_t p);

/// sum y_i A_i psd and sum y_i b_i = -1, exactly.
VerificationReport verify_farkas_ray(const SdpSystem& system,
                                     const RatVector& y);

/// Exact proof that no Farkas ray exists, available when m = k+1 and the
/// trailing block beyond s_{k+1} is nonempty: every y with sum y_i b'_i = -1
/// leaves a nonzero off-diagonal block against a zero diagonal block.
VerificationReport check_weak_infeasibility(const StaircaseForm& form);

struct DualityProbe {
  SymMatrix C;
  double primal_value = 0.0;  // sup C . X over the reduced feasible set
  double dual_value = 0.0;    // inf of the Lagrange dual
  double gap = 0.0;
  bool unbounded = false;     // both values +inf (recession direction found)
  bool numeric_failure = false;
  std::string note;
};

/// Float demonstration of zero duality gap on the reduced system over
/// 0 (+) S^p_+. Not a proof.
DualityProbe duality_probe(const StaircaseForm& form, std::size_t p,
                           const SymMatrix& C, const ToleranceProfile& tol = {});

}  // namespace spectra
