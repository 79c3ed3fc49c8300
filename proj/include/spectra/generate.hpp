#pragma once

// Instance factories: sample a staircase form, then scramble it with random
// unimodular eros and rotations. The inverse scramble is the ground-truth
// transcript.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spectra/system.hpp"

namespace spectra {

class ResampleExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class WeaknessUnconfirmed : public Error {
 public:
  using Error::Error;
};

enum class GenKind { Infeasible, Feasible, StronglyInfeasible, WeaklyInfeasible };

std::string to_string(GenKind k);
GenKind parse_gen_kind(const std::string& s);  // throws Error

struct GenSpec {
  std::size_t n = 3;
  std::size_t m = 2;
  GenKind kind = GenKind::Infeasible;
  std::optional<std::size_t> k;           // sampled when absent
  std::size_t p = 0;                      // feasible kind only
  std::vector<std::size_t> block_sizes;   // sampled when empty
  long entry_bound = 3;
  std::uint64_t seed = 0;
};

inline constexpr const char* kPrngId = "mt19937_64/rejection-v1";

/// Portable sampling on top of mt19937_64 (the standard distributions are
/// implementation-defined, this is not).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  long uniform(long lo, long hi);        // uniform in [lo, hi]
  Rational entry(long bound);            // q/d, q in [-B, B], d in [1, B]
  Rational positive(long bound);         // q/d, q, d in [1, B]

 private:
  std::mt19937_64 eng_;
};

struct GeneratedInstance {
  SdpSystem system;
  Certificate truth;   // transcript maps `system` to truth.staircase.system
  GenSpec resolved;    // k and block sizes as used
  bool confirmed = true;  // weak kind: weakness proved exactly
  int attempts = 1;
};

GeneratedInstance gen_infeasible(const GenSpec& spec);
GeneratedInstance gen_feasible(const GenSpec& spec);
GeneratedInstance gen_strongly_infeasible(const GenSpec& spec);
GeneratedInstance gen_weakly_infeasible(const GenSpec& spec);
/// Dispatches on spec.kind.
GeneratedInstance generate(const GenSpec& spec);

/// Seed of the i-th instance of a batch.
std::uint64_t batch_seed(std::uint64_t seed, std::size_t index);

}  // namespace spectra
