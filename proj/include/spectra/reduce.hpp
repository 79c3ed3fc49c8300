#pragma once

// The conversion algorithm: repeated reduction steps that bring a system into
// staircase form and end in an infeasibility or maximum-rank certificate.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spectra/sdpsolve.hpp"
#include "spectra/system.hpp"

namespace spectra {

class DegenerateComboError : public Error {
 public:
  using Error::Error;
};

class ExactValidationError : public Error {
 public:
  using Error::Error;
};

/// A system part-way through the conversion. Rows [0, ell) are already in
/// staircase shape and r() leading rows/columns are eliminated.
struct ReductionState {
  SdpSystem system;
  Transcript transcript;
  std::size_t ell = 0;
  std::vector<std::size_t> block_sizes;

  std::size_t r() const;
  static ReductionState start(const SdpSystem& source);
};

struct EroResult {
  SdpSystem system;
  Matrix E;  // new rows = E * old rows
};

/// Replaces equation `target` (or the first later row with y_j != 0, swapped
/// into place) by sum_i y_i (A_i, b_i).
EroResult apply_eros(const SdpSystem& system, const RatVector& y,
                     std::size_t target);

enum class RayKind {
  Reduction,  // sum y_i b_i = 0, lower block psd and nonzero
  Terminal,   // sum y_i b_i = -1, lower block psd
};

/// One reduction step with an exact ray. The optional rotation is either the
/// (n-r) x (n-r) block Q or the full diag(I_r, Q); when absent Q comes from
/// psd_block_diagonalize. Throws ExactValidationError when y or the rotation
/// do not qualify.
ReductionState reduction_step(const ReductionState& state, const RatVector& y,
                              RayKind kind,
                              const std::optional<Matrix>& rotation = {});

/// Rounds a float ray to an exact one: y_i = 0 for i < ell, sum y_i b_i =
/// target, lower block of sum y_i A_i psd (and nonzero when asked). Tries each
/// denominator in turn. Returns nullopt when no candidate verifies.
struct RoundedRay {
  RatVector y;
  mpz_class denominator;
};
std::optional<RoundedRay> round_ray(const SdpSystem& system, std::size_t ell,
                                    std::size_t r, const Eigen::VectorXd& y,
                                    const Rational& target, bool nonzero,
                                    const ToleranceProfile& tol,
                                    const std::vector<mpz_class>& denominators);

/// Exact rank-(n-r) solution built from a float point (X, x0) and a relatively
/// interior point (Xs, x0s) of the homogenized system on the face:
/// (X + eps Xs) / (x0 + eps x0s) is rationalized, projected onto the
/// equations, and checked. Throws ExactValidationError when every eps and
/// denominator fails.
SymMatrix max_rank_witness(const SdpSystem& system, std::size_t r,
                           const Eigen::MatrixXd& X, double x0,
                           const Eigen::MatrixXd& Xs, double x0s,
                           const std::vector<mpz_class>& denominators);

struct IterationHint {
  RatVector y;
  std::optional<Matrix> rotation;
};

std::vector<mpz_class> default_denominators();

struct ConvertOptions {
  Mode mode = Mode::Exact;
  ToleranceProfile tol;
  std::vector<IterationHint> hints;
  std::vector<mpz_class> denominators = default_denominators();
  bool classify = true;
};

Certificate convert(const SdpSystem& system, const ConvertOptions& opts = {});

struct StrengthResult {
  Strength strength = Strength::WeakUnconfirmed;
  std::optional<RatVector> ray;
  std::string reason;
};

/// Strong iff k = 0 or an exactly verified Farkas ray exists; weak when
/// weakness is proved exactly or the solver finds no ray.
StrengthResult classify_strength(const SdpSystem& system,
                                 const Certificate& cert,
                                 const ToleranceProfile& tol = {},
                                 const std::vector<mpz_class>& denominators =
                                     default_denominators());

/// Float-mode post-processing: scales the positive-diagonal blocks to
/// identities with D = diag(1/sqrt(d)). Fills staircase.normalized and
/// transcript.V_float.
void normalize_blocks(StaircaseForm& form, Transcript& transcript);

}  // namespace spectra
