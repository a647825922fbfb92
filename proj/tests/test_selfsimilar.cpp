#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "branched/errors.hpp"
#include "branched/selfsimilar.hpp"
#include "branched/tree.hpp"

using namespace branched;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST(BranchingTime, Examples) {
  EXPECT_EQ(branching_time(0), 0.0);
  EXPECT_NEAR(branching_time(1), 0.1616116523, 1e-10);
  EXPECT_EQ(branching_time(2), 0.21875);
  EXPECT_THROW(branching_time(-1), PreconditionError);
}

TEST(BranchingTime, IncreasingWithExactGap) {
  // In double precision t_k is 1/4 - 2^{-3k/2}/4 rounded to the grid of
  // spacing 2^{-55} near 1/4, so strict growth is visible only while the gap
  // exceeds that spacing (k <= 35); beyond it t_k is 1/4 to the last bit.
  const double ulp = std::ldexp(1.0, -55);
  for (int k = 1; k <= 60; ++k) {
    const double gap = 0.25 * std::pow(2.0, -1.5 * k);
    EXPECT_LE(branching_time(k - 1), branching_time(k));
    if (gap > ulp) {
      EXPECT_LT(branching_time(k - 1), branching_time(k)) << "k = " << k;
    }
    EXPECT_NEAR(0.25 - branching_time(k), gap, ulp) << "k = " << k;
    EXPECT_LE(branching_time(k), 0.25);
  }
}

TEST(BarycenterInterval, Examples) {
  EXPECT_EQ(barycenter_interval(0, 1), 0.0);
  EXPECT_EQ(barycenter_interval(1, 1), -0.25);
  EXPECT_EQ(barycenter_interval(1, 2), 0.25);
  EXPECT_EQ(barycenter_interval(2, 3), 0.125);
  EXPECT_THROW(barycenter_interval(2, 5), PreconditionError);
  EXPECT_THROW(barycenter_interval(2, 0), PreconditionError);
}

TEST(MuStar, ShapeAtSmallDepth) {
  const TransportTree one = build_mu_star(1);
  ASSERT_EQ(one.size(), 2u);
  const double t1 = branching_time(1);
  for (const Branch& b : one.branches()) {
    EXPECT_EQ(b.mass, 0.5);
    EXPECT_EQ(b.x0, 0.0);
    EXPECT_NEAR(std::abs(b.x1), t1, 1e-15);
    EXPECT_NEAR(std::abs(b.speed()), 1.0, 1e-14);
  }
  EXPECT_EQ(build_mu_star(2).size(), 6u);
  EXPECT_THROW(build_mu_star(kMaxMaterializedDepth + 1), PreconditionError);
}

TEST(MuStarEnergy, Examples) {
  EXPECT_NEAR(mu_star_energy(1).limit, 1.9571067811865475, 1e-15);
  EXPECT_NEAR(mu_star_energy(1).truncated.total, 3.0 * branching_time(1), 1e-15);
  const TruncatedEnergy deep = mu_star_energy(40);
  EXPECT_LE(deep.truncated.total, deep.limit);
  EXPECT_LE(deep.limit, deep.truncated.total + deep.tail);
  EXPECT_LT(deep.limit - deep.truncated.total, 1e-5);
}

TEST(MuStarEnergy, AnalyticLevelsMatchMaterializedTrees) {
  for (int K = 1; K <= 16; ++K) {
    const EnergyBreakdown m = energy(build_mu_star(K));
    const TruncatedEnergy a = mu_star_energy(K);
    // Up to 2^17 summands, so allow a few thousand ulps of rounding.
    EXPECT_NEAR(m.length_term, a.truncated.length_term, 1e-11) << "depth " << K;
    EXPECT_NEAR(m.kinetic_term, a.truncated.kinetic_term, 1e-11) << "depth " << K;
    EXPECT_LE(a.truncated.total, a.limit);
    EXPECT_LE(a.limit, a.truncated.total + a.tail);
  }
}

TEST(MuStarEnergy, TailIsTheNextLevelsExactly) {
  // tail(K) - tail(K+1) is level K+1's cost, i.e. energy(K+1) - energy(K).
  for (int K = 1; K < 12; ++K) {
    const double step = mu_star_energy(K + 1).truncated.total - mu_star_energy(K).truncated.total;
    EXPECT_NEAR(mu_star_energy(K).tail - mu_star_energy(K + 1).tail, step, 1e-13);
  }
}

TEST(OptimalTree, Examples) {
  EXPECT_NEAR(optimal_tree_energy(0.25, 1.0, 0.0, 40).truncated.total, 1.9571067811865475, 1e-5);
  EXPECT_NEAR(optimal_tree_energy(0.5, 1.0, 0.0, 40).truncated.total, 1.0 / (2.0 - kSqrt2) + 0.5, 1e-5);
  const double centered = optimal_tree_energy(0.25, 1.0, 0.0, 40).limit;
  EXPECT_NEAR(optimal_tree_energy(0.25, 1.0, 0.3, 40).limit - centered, 0.36, 1e-14);
  EXPECT_THROW(optimal_tree(0.2, 1.0, 0.0, 4), RegimeError);
  EXPECT_THROW(optimal_tree(0.08, 0.5, 0.0, 4), RegimeError);
  EXPECT_NO_THROW(optimal_tree(0.1, 0.5, 0.0, 4));
}

TEST(OptimalTree, MaterializedMatchesAnalytic) {
  const double cases[][3] = {{0.25, 1.0, 0.0}, {0.5, 1.0, 0.2}, {0.2, 0.6, -0.4}, {1.5, 0.3, 0.9}};
  for (const auto& c : cases) {
    const TransportTree t = optimal_tree(c[0], c[1], c[2], 12);
    const TruncatedEnergy a = optimal_tree_energy(c[0], c[1], c[2], 12);
    EXPECT_NEAR(energy(t).total, a.truncated.total, 1e-12);
    EXPECT_LE(a.truncated.total, a.limit + 1e-12);
    EXPECT_LE(a.limit, a.truncated.total + a.tail);
    EXPECT_TRUE(validate(t).ok());
    EXPECT_NEAR(total_mass(trace_at(t, 0.0)), c[1], 1e-14);
  }
}

TEST(SelectBranchCount, Examples) {
  EXPECT_EQ(select_branch_count((kSqrt2 + 1.0) / 8.0).x_opt, 2.0);
  EXPECT_EQ(select_branch_count(0.28).N, 2);
  EXPECT_EQ(select_branch_count(0.6).N, 1);
  EXPECT_THROW(select_branch_count(0.2), RegimeError);
}

TEST(SelectBranchCount, AgreesWithExhaustiveIntegerSearch) {
  auto cost = [](int n, double T) { return 1.0 / (std::sqrt(double(n)) * (2.0 - kSqrt2)) + n * T; };
  for (int i = 0; i <= 400; ++i) {
    const double T = 0.25 + 0.005 * i;
    int best = 1;
    for (int n = 2; n <= 50; ++n) {
      if (cost(n, T) < cost(best, T) - 1e-12) best = n;
    }
    if (std::abs(T - 0.5) < 1e-9) continue;  // exact tie between 1 and 2
    EXPECT_EQ(select_branch_count(T).N, best) << "T = " << T;
  }
}

TEST(SelectBranchCount, ThresholdDiscrepancyIsSurfaced) {
  const BranchCount bc = select_branch_count(0.3);
  EXPECT_EQ(bc.switch_threshold, 0.5);
  EXPECT_NEAR(bc.stated_threshold, 1.0 / (4.0 * (2.0 * kSqrt2 - 2.0)), 1e-15);
  // Between the two thresholds the direct minimization still picks two stems.
  EXPECT_EQ(select_branch_count(0.4).N, 2);
}

TEST(SymmetricMinimizer, Examples) {
  EXPECT_NEAR(symmetric_energy(0.28, 40).truncated.total, 3.5342136, 1e-5 + symmetric_energy(0.28, 40).tail);
  EXPECT_NEAR(symmetric_energy(0.6, 40).limit, 2.0 * (1.0 / (2.0 - kSqrt2) + 0.6), 1e-14);
  const TransportTree two = symmetric_minimizer(0.28, 6);
  const AtomicMeasure stems = trace_at(two, 0.0);
  ASSERT_EQ(stems.size(), 2u);
  EXPECT_NEAR(stems.atoms()[0].position, -0.25, 1e-15);
  EXPECT_NEAR(stems.atoms()[1].position, 0.25, 1e-15);
  EXPECT_THROW(symmetric_minimizer(0.2, 4), RegimeError);
}

TEST(SymmetricMinimizer, ValidMirrorSymmetricAndConsistent) {
  for (double T : {0.28, 0.6}) {
    const TransportTree t = symmetric_minimizer(T, 7);
    EXPECT_TRUE(validate(t).ok());
    EXPECT_NEAR(energy(t).total, symmetric_energy(T, 7).truncated.total, 1e-12);
    // Mirroring in time maps the branch set to itself.
    const TransportTree m = mirror_time(t);
    std::vector<Branch> a(t.branches().begin(), t.branches().end()), b(m.branches().begin(), m.branches().end());
    auto key = [](const Branch& x, const Branch& y) {
      return std::tie(x.t0, x.t1, x.x0, x.x1, x.mass) < std::tie(y.t0, y.t1, y.x0, y.x1, y.mass);
    };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    EXPECT_EQ(a, b);
    // Both end traces are the same discretization of the uniform measure.
    EXPECT_EQ(trace_at(t, t.horizon().begin), trace_at(t, t.horizon().end));
  }
}
