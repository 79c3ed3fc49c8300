#include <gtest/gtest.h>

#include "spectra/certify.hpp"
#include "spectra/generate.hpp"
#include "spectra/reduce.hpp"

using namespace spectra;

namespace {

GenSpec spec(GenKind kind, std::size_t n, std::size_t m, std::uint64_t seed) {
  GenSpec s;
  s.kind = kind;
  s.n = n;
  s.m = m;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Sampler, BelowStaysInRange) {
  Sampler rng(1);
  std::vector<int> hits(7);
  for (int i = 0; i < 7000; ++i) ++hits[rng.below(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Sampler, EntriesRespectBound) {
  Sampler rng(2);
  for (int i = 0; i < 500; ++i) {
    Rational q = rng.entry(4);
    EXPECT_LE(abs(q.get_num()), 4);
    EXPECT_LE(q.get_den(), 4);
    EXPECT_GT(rng.positive(4), 0);
  }
}

TEST(Generate, Deterministic) {
  for (GenKind kind : {GenKind::Infeasible, GenKind::Feasible,
                       GenKind::WeaklyInfeasible, GenKind::StronglyInfeasible}) {
    GenSpec s = spec(kind, 4, 3, 99);
    if (kind == GenKind::Feasible) s.p = 2;
    EXPECT_EQ(generate(s).system, generate(s).system) << to_string(kind);
  }
  EXPECT_NE(generate(spec(GenKind::Infeasible, 4, 3, 1)).system,
            generate(spec(GenKind::Infeasible, 4, 3, 2)).system);
}

TEST(Generate, InfeasibleTruthVerifies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratedInstance g = gen_infeasible(spec(GenKind::Infeasible, 5, 4, seed));
    EXPECT_TRUE(replay_infeasibility(g.truth.staircase).accepted);
    EXPECT_TRUE(verify_transcript(g.system, g.truth.staircase.system,
                                  g.truth.transcript)
                    .accepted);
    EXPECT_EQ(apply_transcript(g.system, g.truth.transcript), g.truth.staircase.system);
  }
}

TEST(Generate, FeasibleWitnessMapsBack) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenSpec s = spec(GenKind::Feasible, 5, 4, seed);
    s.p = seed % 4;
    GeneratedInstance g = gen_feasible(s);
    ASSERT_TRUE(g.truth.X_source);
    EXPECT_EQ(g.truth.p, s.p);
    EXPECT_TRUE(is_psd(*g.truth.X_source));
    for (std::size_t i = 0; i < g.system.m(); ++i)
      EXPECT_EQ(dot(g.system.A[i], *g.truth.X_source), g.system.b[i]);
  }
}

TEST(Generate, ExplicitBlocksResemblingFourByFour) {
  GenSpec s = spec(GenKind::Feasible, 4, 4, 5);
  s.p = 2;
  s.k = 2;
  s.block_sizes = {1, 1};
  GeneratedInstance g = gen_feasible(s);
  EXPECT_EQ(g.truth.staircase.block_sizes, (std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE(check_max_rank(g.truth.staircase, *g.truth.X, 2).accepted);
}

TEST(Generate, StronglyInfeasibleRayVerifies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratedInstance g = gen_strongly_infeasible(spec(GenKind::StronglyInfeasible, 4, 3, seed));
    EXPECT_EQ(g.truth.staircase.k, 0u);
    ASSERT_TRUE(g.truth.farkas_ray);
    EXPECT_TRUE(verify_farkas_ray(g.system, *g.truth.farkas_ray).accepted);
  }
}

TEST(Generate, WeaklyInfeasibleIsConfirmed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenSpec s = spec(GenKind::WeaklyInfeasible, 3, 2, seed);
    s.k = 1;
    GeneratedInstance g = gen_weakly_infeasible(s);
    EXPECT_TRUE(g.confirmed);
    EXPECT_EQ(g.truth.strength, Strength::Weak);
    EXPECT_TRUE(check_weak_infeasibility(g.truth.staircase).accepted);
    // No solver ray may verify.
    SubproblemOutcome f = solve_farkas(g.system, {});
    if (f.tag == OutcomeTag::DualRay) {
      auto r = round_ray(g.system, 0, 0, f.y, -1, false, {}, default_denominators());
      EXPECT_FALSE(r && verify_farkas_ray(g.system, r->y).accepted);
    }
  }
}

TEST(Generate, FeasibleRankZero) {
  GenSpec s = spec(GenKind::Feasible, 3, 3, 4);
  s.p = 0;
  GeneratedInstance g = gen_feasible(s);
  EXPECT_TRUE(g.truth.X_source->is_zero());
  for (const auto& bi : g.system.b) EXPECT_EQ(bi, 0);
}

TEST(Generate, RejectsInconsistentSpecs) {
  GenSpec s = spec(GenKind::WeaklyInfeasible, 3, 3, 0);
  s.k = 1;
  EXPECT_THROW(generate(s), Error);
  s = spec(GenKind::Feasible, 3, 2, 0);
  s.p = 4;
  EXPECT_THROW(generate(s), Error);
  s = spec(GenKind::StronglyInfeasible, 3, 2, 0);
  s.k = 1;
  EXPECT_THROW(generate(s), Error);
}

TEST(Generate, ZeroBoundExhausts) {
  GenSpec s = spec(GenKind::Infeasible, 3, 2, 0);
  s.k = 1;
  s.entry_bound = 0;
  EXPECT_THROW(generate(s), ResampleExhausted);
}

TEST(Generate, RoundTripThroughConvert) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratedInstance inf = gen_infeasible(spec(GenKind::Infeasible, 4, 3, seed));
    Certificate c = convert(inf.system);
    EXPECT_NE(c.verdict, Verdict::Feasible) << "seed " << seed;

    GenSpec fs = spec(GenKind::Feasible, 4, 3, seed);
    fs.p = seed % 3;
    GeneratedInstance fea = gen_feasible(fs);
    Certificate d = convert(fea.system);
    EXPECT_NE(d.verdict, Verdict::Infeasible) << "seed " << seed;
    if (d.verdict == Verdict::Feasible) EXPECT_EQ(d.p, fs.p) << "seed " << seed;
  }
}
