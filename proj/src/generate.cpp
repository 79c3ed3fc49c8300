#include "spectra/generate.hpp"

#include <limits>

#include "spectra/certify.hpp"

namespace spectra {

namespace {

constexpr int kMaxAttempts = 200;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidSpecError("invalid generator spec: " + what);
}

SymMatrix random_symmetric(Sampler& rng, std::size_t n, long bound) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, rng.entry(bound));
  return a;
}

// Staircase row: random entries in the leading s0 rows/columns, positive
// diagonal on [s0, s0 + r), zero elsewhere.
SymMatrix staircase_row(Sampler& rng, std::size_t n, std::size_t s0,
                        std::size_t r, long bound) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < s0; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, rng.entry(bound));
  for (std::size_t j = s0; j < s0 + r; ++j) a.set(j, j, rng.positive(bound));
  return a;
}

// Product of elementary factors row_i += c row_j (c in {-2,-1,1,2}) and swaps.
Matrix unimodular(Sampler& rng, std::size_t n) {
  Matrix u = Matrix::identity(n);
  if (n < 2) return u;
  const long coef[] = {-2, -1, 1, 2};
  for (std::size_t step = 0; step < n + 1; ++step) {
    const std::size_t i = rng.below(n);
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    if (rng.below(5) == 0) {
      for (std::size_t c = 0; c < n; ++c) std::swap(u(i, c), u(j, c));
    } else {
      const Rational f = coef[rng.below(4)];
      for (std::size_t c = 0; c < n; ++c) u(i, c) += f * u(j, c);
    }
  }
  return u;
}

// Random composition of total into parts >= 1.
std::vector<std::size_t> composition(Sampler& rng, std::size_t total,
                                     std::size_t parts) {
  std::vector<std::size_t> out(parts, 1);
  for (std::size_t extra = total - parts; extra > 0; --extra) ++out[rng.below(parts)];
  return out;
}

struct Canonical {
  SdpSystem system;
  std::size_t k = 0;
  std::vector<std::size_t> blocks;
  std::optional<SymMatrix> X;
};

// Scrambles with S_i = W^T (sum_j G_ij F_j) W, b_S = G b_F; the transcript is
// T = G^{-1}, V = W^{-1}.
GeneratedInstance scramble(Sampler& rng, Canonical c, Verdict verdict) {
  const std::size_t m = c.system.m(), n = c.system.n;
  const Matrix g = unimodular(rng, m);
  const Matrix w = unimodular(rng, n);
  const Matrix wt = w.transpose();

  GeneratedInstance out;
  out.system.n = n;
  out.system.b = g * c.system.b;
  for (std::size_t i = 0; i < m; ++i) {
    RatVector row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = g(i, j);
    out.system.A.emplace_back(wt * linear_combination(c.system.A, row, n).matrix() * w);
  }

  Certificate& t = out.truth;
  t.verdict = verdict;
  t.staircase.system = std::move(c.system);
  t.staircase.k = c.k;
  t.staircase.block_sizes = std::move(c.blocks);
  t.staircase.style = BlockStyle::PositiveDiagonal;
  t.transcript.mode = Mode::Exact;
  t.transcript.T = m ? inverse(g) : Matrix(0, 0);
  t.transcript.V = inverse(w);
  if (c.X) {
    t.p = rank(c.X->matrix());
    t.X = c.X;
    t.X_source = SymMatrix(t.transcript.V * c.X->matrix() * t.transcript.V.transpose());
  }
  return out;
}

void check_truth(const GeneratedInstance& g) {
  const Certificate& t = g.truth;
  VerificationReport rep =
      verify_transcript(g.system, t.staircase.system, t.transcript);
  if (t.verdict == Verdict::Infeasible)
    rep.merge(replay_infeasibility(t.staircase));
  else
    rep.merge(check_max_rank(t.staircase, *t.X, t.p));
  if (!rep.accepted)
    throw Error("generated ground truth failed " + rep.failures.front().check +
                " at " + rep.failures.front().location);
}

Canonical infeasible_form(Sampler& rng, const GenSpec& spec, std::size_t k,
                          std::vector<std::size_t> blocks) {
  const std::size_t n = spec.n, m = spec.m;
  if (blocks.empty()) {
    std::size_t remaining = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t room = remaining - (k - 1 - i);
      const std::size_t r = 1 + rng.below(std::min<std::size_t>(room, 2));
      blocks.push_back(r);
      remaining -= r;
    }
    blocks.push_back(rng.below(remaining + 1));
  }
  Canonical c;
  c.k = k;
  c.system.n = n;
  std::size_t s0 = 0;
  for (std::size_t i = 0; i <= k; ++i) {
    c.system.A.push_back(staircase_row(rng, n, s0, blocks[i], spec.entry_bound));
    c.system.b.push_back(i < k ? Rational(0) : Rational(-1));
    s0 += blocks[i];
  }
  for (std::size_t i = k + 1; i < m; ++i) {
    c.system.A.push_back(random_symmetric(rng, n, spec.entry_bound));
    c.system.b.push_back(rng.entry(spec.entry_bound));
  }
  c.blocks = std::move(blocks);
  return c;
}

void check_blocks(const GenSpec& spec, std::size_t k, bool infeasible) {
  const auto& b = spec.block_sizes;
  if (b.empty()) return;
  require(b.size() == (infeasible ? k + 1 : k), "blockSizes must have " +
                                                    std::to_string(infeasible ? k + 1 : k) +
                                                    " entries");
  std::size_t total = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i < k) require(b[i] > 0, "r_i must be positive for i <= k");
    total += b[i];
  }
  require(total <= spec.n, "block sizes exceed n");
  if (!infeasible) require(total == spec.n - spec.p, "block sizes must sum to n - p");
}

template <typename Build>
GeneratedInstance with_retries(const GenSpec& spec, Build build) {
  require(spec.n >= 1, "n must be positive");
  require(spec.entry_bound >= 0, "entryBound must be nonnegative");
  Sampler rng(spec.seed);
  std::string last;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::optional<GeneratedInstance> g = build(rng, last);
    if (g) {
      g->attempts = attempt;
      check_truth(*g);
      return std::move(*g);
    }
  }
  throw ResampleExhausted("no valid instance after " + std::to_string(kMaxAttempts) +
                          " attempts" + (last.empty() ? "" : ": " + last));
}

bool degenerate_diagonal(const Canonical& c) {
  std::size_t s0 = 0;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    for (std::size_t j = s0; j < s0 + c.blocks[i]; ++j)
      if (sgn(c.system.A[i](j, j)) <= 0) return true;
    s0 += c.blocks[i];
  }
  return false;
}

}  // namespace

std::uint64_t Sampler::below(std::uint64_t n) {
  if (n == 0) throw Error("empty sampling range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x;
  do x = eng_(); while (x > limit);
  return x % n;
}

long Sampler::uniform(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Sampler::entry(long bound) {
  if (bound <= 0) return 0;
  Rational r(mpz_class(uniform(-bound, bound)), mpz_class(uniform(1, bound)));
  r.canonicalize();
  return r;
}

Rational Sampler::positive(long bound) {
  if (bound <= 0) return 0;
  Rational r(mpz_class(uniform(1, bound)), mpz_class(uniform(1, bound)));
  r.canonicalize();
  return r;
}

std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::Infeasible: return "infeasible";
    case GenKind::Feasible: return "feasible";
    case GenKind::StronglyInfeasible: return "strongly-infeasible";
    case GenKind::WeaklyInfeasible: return "weakly-infeasible";
  }
  return "infeasible";
}

GenKind parse_gen_kind(const std::string& s) {
  if (s == "infeasible") return GenKind::Infeasible;
  if (s == "feasible") return GenKind::Feasible;
  if (s == "strongly-infeasible" || s == "stronglyInfeasible")
    return GenKind::StronglyInfeasible;
  if (s == "weakly-infeasible" || s == "weaklyInfeasible")
    return GenKind::WeaklyInfeasible;
  throw InvalidSpecError("unknown instance kind '" + s + "'");
}

std::uint64_t batch_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 step; distinct streams per index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GeneratedInstance gen_infeasible(const GenSpec& spec) {
  require(spec.m >= 1, "an infeasible system needs m >= 1");
  const std::size_t kmax = std::min(spec.m - 1, spec.n);
  if (spec.k) require(*spec.k <= kmax, "k must satisfy k + 1 <= m and k <= n");
  if (spec.k) check_blocks(spec, *spec.k, true);
  GenSpec resolved = spec;
  return with_retries(spec, [&](Sampler& rng, std::string& why) -> std::optional<GeneratedInstance> {
    const std::size_t k = spec.k ? *spec.k : rng.below(kmax + 1);
    Canonical c = infeasible_form(rng, spec, k, spec.block_sizes);
    if (degenerate_diagonal(c)) {
      why = "diagonal block entries vanish (entryBound too small)";
      return std::nullopt;
    }
    resolved.k = k;
    resolved.block_sizes = c.blocks;
    GeneratedInstance g = scramble(rng, std::move(c), Verdict::Infeasible);
    if (k == 0) {
      g.truth.strength = Strength::Strong;
      RatVector y(spec.m);
      for (std::size_t j = 0; j < spec.m; ++j) y[j] = g.truth.transcript.T(0, j);
      g.truth.farkas_ray = y;
    } else if (check_weak_infeasibility(g.truth.staircase).accepted) {
      g.truth.strength = Strength::Weak;
    }
    g.resolved = resolved;
    return g;
  });
}

GeneratedInstance gen_strongly_infeasible(const GenSpec& spec) {
  require(!spec.k || *spec.k == 0, "strongly infeasible instances have k = 0");
  GenSpec s = spec;
  s.kind = GenKind::StronglyInfeasible;
  s.k = 0;
  GeneratedInstance g = gen_infeasible(s);
  g.resolved.kind = GenKind::StronglyInfeasible;
  if (!g.truth.farkas_ray || !verify_farkas_ray(g.system, *g.truth.farkas_ray).accepted)
    throw Error("ground-truth Farkas ray failed verification");
  return g;
}

GeneratedInstance gen_weakly_infeasible(const GenSpec& spec) {
  require(spec.m >= 2, "weakly infeasible instances need m >= 2");
  const std::size_t k = spec.m - 1;
  require(!spec.k || *spec.k == k, "weakly infeasible instances have k + 1 = m");
  require(k < spec.n, "weakly infeasible instances need k < n");
  check_blocks(spec, k, true);
  if (!spec.block_sizes.empty()) {
    std::size_t total = 0;
    for (auto r : spec.block_sizes) total += r;
    require(total < spec.n, "the trailing block must be nonempty");
  }
  GenSpec resolved = spec;
  resolved.kind = GenKind::WeaklyInfeasible;
  resolved.k = k;
  return with_retries(spec, [&](Sampler& rng, std::string& why) -> std::optional<GeneratedInstance> {
    std::vector<std::size_t> blocks = spec.block_sizes;
    if (blocks.empty()) {
      // r_1..r_k >= 1 and r_{k+1} >= 0 with at least one column left over.
      std::size_t remaining = spec.n - 1;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t room = remaining - (k - 1 - i);
        const std::size_t r = 1 + rng.below(std::min<std::size_t>(room, 2));
        blocks.push_back(r);
        remaining -= r;
      }
      blocks.push_back(rng.below(remaining + 1));
    }
    Canonical c = infeasible_form(rng, spec, k, blocks);
    if (degenerate_diagonal(c)) {
      why = "diagonal block entries vanish (entryBound too small)";
      return std::nullopt;
    }
    // Obstructing block: rows of block k against the trailing columns.
    std::size_t sk1 = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) sk1 += c.blocks[i];
    const std::size_t sk = sk1 + c.blocks[k - 1];
    const std::size_t t = sk + c.blocks[k];
    bool nonzero = false;
    for (std::size_t a = sk1; a < sk; ++a)
      for (std::size_t b = t; b < spec.n; ++b)
        if (sgn(c.system.A[k](a, b)) != 0) nonzero = true;
    if (!nonzero) {
      why = "obstructing block is zero";
      return std::nullopt;
    }
    resolved.block_sizes = c.blocks;
    GeneratedInstance g = scramble(rng, std::move(c), Verdict::Infeasible);
    if (!check_weak_infeasibility(g.truth.staircase).accepted) {
      why = "weakness could not be confirmed";
      return std::nullopt;
    }
    g.truth.strength = Strength::Weak;
    g.confirmed = true;
    g.resolved = resolved;
    return g;
  });
}

GeneratedInstance gen_feasible(const GenSpec& spec) {
  require(spec.p <= spec.n, "p must not exceed n");
  const std::size_t need = spec.n - spec.p;
  const std::size_t kmin = need > 0 ? 1 : 0;
  const std::size_t kmax = std::min(spec.m, need);
  require(kmin <= kmax, "n - p > 0 needs at least one equation");
  if (spec.k) require(*spec.k >= kmin && *spec.k <= kmax, "k out of range for n, m, p");
  if (spec.k) check_blocks(spec, *spec.k, false);
  GenSpec resolved = spec;
  return with_retries(spec, [&](Sampler& rng, std::string& why) -> std::optional<GeneratedInstance> {
    const std::size_t k = spec.k ? *spec.k : kmin + rng.below(kmax - kmin + 1);
    std::vector<std::size_t> blocks =
        spec.block_sizes.empty() ? (k ? composition(rng, need, k) : std::vector<std::size_t>{})
                                 : spec.block_sizes;
    Canonical c;
    c.k = k;
    c.system.n = spec.n;
    std::size_t s0 = 0;
    for (std::size_t i = 0; i < k; ++i) {
      c.system.A.push_back(staircase_row(rng, spec.n, s0, blocks[i], spec.entry_bound));
      c.system.b.push_back(0);
      s0 += blocks[i];
    }
    c.blocks = blocks;
    if (degenerate_diagonal(c)) {
      why = "diagonal block entries vanish (entryBound too small)";
      return std::nullopt;
    }
    // X = 0 (+) P with P = G G^T + I.
    Matrix gm(spec.p, spec.p);
    for (std::size_t i = 0; i < spec.p; ++i)
      for (std::size_t j = 0; j < spec.p; ++j) gm(i, j) = rng.entry(std::min(spec.entry_bound, 2L));
    Matrix x(spec.n, spec.n);
    x.set_block(need, need, gm * gm.transpose() + Matrix::identity(spec.p));
    c.X = SymMatrix(x);
    for (std::size_t i = k; i < spec.m; ++i) {
      SymMatrix a = random_symmetric(rng, spec.n, spec.entry_bound);
      c.system.b.push_back(dot(a, *c.X));
      c.system.A.push_back(std::move(a));
    }
    resolved.k = k;
    resolved.block_sizes = blocks;
    GeneratedInstance g = scramble(rng, std::move(c), Verdict::Feasible);
    g.resolved = resolved;
    return g;
  });
}

GeneratedInstance generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::Infeasible: return gen_infeasible(spec);
    case GenKind::Feasible: return gen_feasible(spec);
    case GenKind::StronglyInfeasible: return gen_strongly_infeasible(spec);
    case GenKind::WeaklyInfeasible: return gen_weakly_infeasible(spec);
  }
  throw Error("unknown instance kind");
}

}  // namespace spectra
