#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "spectra/sdpsolve.hpp"

namespace spectra {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd combination(const SdpSystem& s, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(static_cast<Eigen::Index>(s.n),
                                static_cast<Eigen::Index>(s.n));
  for (std::size_t i = 0; i < s.m(); ++i)
    out += y(static_cast<Eigen::Index>(i)) * to_eigen(s.A[i]);
  return out;
}

double min_eig(const MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(a).eigenvalues()(0);
}

double homogenized_residual(const SdpSystem& s, const SubproblemOutcome& o) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.m(); ++i) {
    double lhs = to_eigen(s.A[i]).cwiseProduct(o.X).sum();
    worst = std::max(worst, std::abs(lhs - s.b[i].get_d() * o.x0));
  }
  return worst;
}

void expect_ray(const SdpSystem& s, std::size_t r, const SubproblemOutcome& o,
                double target_b, bool nonzero) {
  ASSERT_EQ(o.tag, OutcomeTag::DualRay) << o.diagnostics.note;
  const VectorXd b = to_eigen(s.b);
  EXPECT_NEAR(b.dot(o.y), target_b, 1e-7);
  const auto q = static_cast<Eigen::Index>(s.n - r);
  MatrixXd lower = combination(s, o.y).bottomRightCorner(q, q);
  EXPECT_GT(min_eig(lower), -1e-7);
  if (nonzero) {
    EXPECT_GT(lower.norm(), 1e-3);
  }
}

TEST(SolveAux, WorkedExampleFirstStepFindsRay) {
  auto s = fixtures::six_by_four();
  auto o = solve_aux(s, {4, 0}, {});
  expect_ray(s, 0, o, 0.0, true);
}

TEST(SolveAux, IdentitySingletonIsStrictlyFeasible) {
  SdpSystem s{2, {SymMatrix::identity(2)}, {1}};
  auto o = solve_aux(s, {2, 0}, {});
  ASSERT_EQ(o.tag, OutcomeTag::StrictlyFeasible);
  ASSERT_GT(o.x0, 0.0);
  MatrixXd x = o.X / o.x0;
  EXPECT_NEAR((x - 0.5 * MatrixXd::Identity(2, 2)).norm(), 0.0, 1e-6);
}

TEST(SolveAux, RandomStrictlyFeasibleSuite) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> entry(-3, 3);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 5;
    std::size_t m = 1 + trial % 6;
    // Interior point X0 = G G^T + I.
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = entry(rng);
    SymMatrix x0(g * g.transpose() + Matrix::identity(n));
    SdpSystem s;
    s.n = n;
    for (std::size_t i = 0; i < m; ++i) {
      SymMatrix a(n);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p; q < n; ++q) a.set(p, q, entry(rng));
      s.b.push_back(dot(a, x0));
      s.A.push_back(std::move(a));
    }
    auto o = solve_aux(s, {n, 0}, {});
    ASSERT_EQ(o.tag, OutcomeTag::StrictlyFeasible) << "trial " << trial;
    EXPECT_GT(min_eig(o.X), 1e-9);
    EXPECT_LT(homogenized_residual(s, o), 1e-8);
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(SolveHom, WorkedExampleLastStepHasNegativeRay) {
  auto s = fixtures::six_by_four_reformulated();
  auto o = solve_hom(s, {4, 2}, {});
  expect_ray(s, 2, o, -1.0, false);
}

TEST(SolveHom, MotivatingSystemAfterOneReduction) {
  auto s = fixtures::motivating();
  auto o = solve_hom(s, {3, 1}, {});
  expect_ray(s, 1, o, -1.0, false);
}

TEST(SolveHom, FeasibleExampleIsStrictlyFeasibleOnItsFace) {
  auto s = fixtures::four_by_four_reformulated();
  auto o = solve_hom(s, {4, 2}, {});
  ASSERT_EQ(o.tag, OutcomeTag::StrictlyFeasible);
  EXPECT_GT(o.x0, 0.0);
  EXPECT_GT(min_eig(o.X.bottomRightCorner(2, 2)), 1e-9);
  EXPECT_LT(homogenized_residual(s, o), 1e-8);
  EXPECT_NEAR(o.X.topLeftCorner(2, 4).norm(), 0.0, 1e-12);
}

TEST(SolveHom, EmptyFaceUsesExactLinearAlgebra) {
  SdpSystem s{2, {SymMatrix::diagonal({1, 0}), SymMatrix::diagonal({0, 1})},
              {0, 3}};
  auto o = solve_hom(s, {2, 2}, {});
  ASSERT_EQ(o.tag, OutcomeTag::DualRay);
  EXPECT_DOUBLE_EQ(o.y(1), -1.0 / 3.0);
  EXPECT_EQ(o.diagnostics.iterations, 0);

  SdpSystem z{2, {SymMatrix::diagonal({1, 0})}, {0}};
  EXPECT_EQ(solve_hom(z, {2, 2}, {}).tag, OutcomeTag::StrictlyFeasible);
}

TEST(SolveFarkas, StronglyInfeasibleExample) {
  auto s = fixtures::strong3();
  auto o = solve_farkas(s, {});
  expect_ray(s, 0, o, -1.0, false);
}

TEST(SolveFarkas, WeaklyInfeasibleHasNoRay) {
  auto o = solve_farkas(fixtures::motivating(), {});
  EXPECT_NE(o.tag, OutcomeTag::DualRay);
}

TEST(SolveFarkas, FeasibleHasNoRay) {
  SdpSystem s{2, {SymMatrix::identity(2)}, {1}};
  EXPECT_EQ(solve_farkas(s, {}).tag, OutcomeTag::StrictlyFeasible);
}

TEST(Solver, Deterministic) {
  auto s = fixtures::six_by_four();
  auto a = solve_aux(s, {4, 0}, {});
  auto b = solve_aux(s, {4, 0}, {});
  EXPECT_EQ(a.tag, b.tag);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.diagnostics.iterations, b.diagnostics.iterations);
}

}  // namespace
}  // namespace spectra
