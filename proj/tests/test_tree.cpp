#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "branched/errors.hpp"
#include "branched/measures.hpp"
#include "branched/selfsimilar.hpp"
#include "branched/tree.hpp"
#include "branched/tree_io.hpp"

using namespace branched;

namespace {

TransportTree single(double x1) { return TransportTree({{1.0, 0.0, 1.0, 0.0, x1}}, {0.0, 1.0}); }

// Brute-force energy straight from the definition, integrating the squared
// speed numerically; used as an oracle for the closed-form per-branch sum.
double integrated_energy(const TransportTree& t, int steps) {
  double e = 0.0;
  for (const Branch& b : t.branches()) {
    const double h = b.duration() / steps;
    for (int i = 0; i < steps; ++i) {
      const double s = b.t0 + (i + 0.5) * h;
      const double v = (b.position_at(s + 0.5 * h) - b.position_at(s - 0.5 * h)) / h;
      e += h * (1.0 + b.mass * v * v);
    }
  }
  return e;
}

}  // namespace

TEST(Energy, Examples) {
  EXPECT_DOUBLE_EQ(energy(single(0.0)).total, 1.0);
  EXPECT_DOUBLE_EQ(energy(single(1.0)).total, 2.0);
  const double t1 = branching_time(1);
  EXPECT_NEAR(energy(build_mu_star(1)).total, 3.0 * t1, 1e-15);
  EXPECT_NEAR(3.0 * t1, 0.48483495, 1e-8);
}

TEST(Energy, MatchesIntegratedDefinition) {
  const TransportTree t = build_mu_star(5);
  EXPECT_NEAR(energy(t).total, integrated_energy(t, 50), 1e-12);
  const EnergyBreakdown e = energy(t);
  EXPECT_DOUBLE_EQ(e.total, e.length_term + e.kinetic_term);
}

TEST(TransportTree, RejectsInvalidBranches) {
  EXPECT_THROW(TransportTree({{1.0, 1.0, 1.0, 0.0, 0.0}}, {0.0, 1.0}), PreconditionError);
  EXPECT_THROW(TransportTree({{0.0, 0.0, 1.0, 0.0, 0.0}}, {0.0, 1.0}), PreconditionError);
  EXPECT_THROW(TransportTree({{1.0, 0.0, 2.0, 0.0, 0.0}}, {0.0, 1.0}), PreconditionError);
}

TEST(Validate, MuStarHasNoViolations) {
  for (int K = 1; K <= 8; ++K) EXPECT_TRUE(validate(build_mu_star(K)).ok()) << "depth " << K;
  EXPECT_TRUE(validate(optimal_tree(0.6, 0.5, 0.2, 6)).ok());
}

TEST(Validate, FlagsCrossingBranches) {
  const TransportTree t({{0.5, 0, 1, -1, 1}, {0.5, 0, 1, 1, -1}}, {0, 1});
  EXPECT_GT(validate(t).count(ViolationKind::Overlap), 0u);
}

TEST(Validate, FlagsConservationLeak) {
  const TransportTree t({{1.0, 0, 1, 0, 0}, {0.9, 1, 2, 0, 0}}, {0, 2});
  const ValidationReport r = validate(t);
  ASSERT_EQ(r.count(ViolationKind::Conservation), 1u);
  for (const Violation& v : r.violations) {
    if (v.kind == ViolationKind::Conservation) {
      EXPECT_NEAR(v.amount, 0.1, 1e-12);
    }
  }
}

TEST(Validate, FlagsOrderSwapAtJunction) {
  // Two paths from separate sources whose order flips without touching.
  const TransportTree t({{0.5, 0, 1, -1, 0.5}, {0.5, 0, 1, 1, 0.6}, {0.5, 1, 2, 0.5, 2}, {0.5, 1, 2, 0.6, -2}},
                        {0, 2});
  EXPECT_FALSE(validate(t).ok());
}

TEST(TraceAt, Examples) {
  const TransportTree mu = build_mu_star(3);
  EXPECT_EQ(trace_at(mu, 0.0), AtomicMeasure::dirac(0.0));
  const double t1 = branching_time(1);
  const AtomicMeasure at1 = trace_at(mu, t1);
  ASSERT_EQ(at1.size(), 2u);
  EXPECT_NEAR(at1.atoms()[0].position, -t1, 1e-15);
  EXPECT_NEAR(at1.atoms()[1].position, t1, 1e-15);
  EXPECT_DOUBLE_EQ(at1.atoms()[0].mass, 0.5);
  for (int K = 1; K <= 6; ++K) {
    const TransportTree t = build_mu_star(K);
    const AtomicMeasure end = trace_at(t, branching_time(K));
    ASSERT_EQ(end.size(), std::size_t{1} << K);
    for (const Atom& a : end.atoms()) EXPECT_DOUBLE_EQ(a.mass, std::ldexp(1.0, -K));
  }
  EXPECT_THROW(trace_at(mu, -0.1), PreconditionError);
  EXPECT_THROW(trace_at(mu, 0.3), PreconditionError);
}

TEST(Shear, Examples) {
  const TransportTree mu = build_mu_star(8);
  EXPECT_EQ(shear(mu, 0.0, 0.25), mu);
  EXPECT_DOUBLE_EQ(energy(shear(single(0.0), 1.0, 1.0)).total, 2.0);
  // Truncated at t_8 < 1/4: the added kinetic energy is 0.36 * t_8 / (1/4).
  const double added = energy(shear(mu, 0.3, 0.25)).total - energy(mu).total;
  EXPECT_NEAR(added, 0.36 * branching_time(8) / 0.25, 1e-12);
  EXPECT_NEAR(added, 0.36, 0.36 * std::pow(2.0, -12) + 1e-12);
}

TEST(Shear, FullHorizonIdentityAndInverse) {
  const TransportTree base = build_mu_star(7);
  const double T = base.horizon().end;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double X = U(rng);
    const TransportTree s = shear(base, X, T);
    EXPECT_NEAR(energy(s).total, energy(base).total + X * X / T, 1e-10);
    const TransportTree back = shear(s, -X, T);
    for (std::size_t k = 0; k < base.size(); ++k) {
      EXPECT_NEAR(back.branches()[k].x0, base.branches()[k].x0, 1e-12);
      EXPECT_NEAR(back.branches()[k].x1, base.branches()[k].x1, 1e-12);
    }
  }
}

TEST(Shear, RequiresCenteredFinalTrace) {
  const TransportTree off({{1.0, 0.0, 1.0, 0.0, 0.5}}, {0.0, 1.0});
  EXPECT_THROW(shear(off, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(shear(build_mu_star(3), 1.0, 0.1), PreconditionError);
}

TEST(Rescale, Examples) {
  const TransportTree mu = build_mu_star(6);
  EXPECT_EQ(rescale_mass_time(mu, 1.0), mu);
  EXPECT_NEAR(energy(rescale_mass_time(mu, 0.25)).total, energy(mu).total / 8.0, 1e-14);
  const TransportTree half = rescale_mass_time(build_mu_star(12), 0.5);
  EXPECT_NEAR(half.horizon().end, branching_time(12) * std::pow(0.5, 1.5), 1e-15);
  EXPECT_THROW(rescale_mass_time(mu, 0.0), PreconditionError);
}

TEST(TreeOps, TranslationStemMirrorCombine) {
  const TransportTree mu = build_mu_star(5);
  EXPECT_NEAR(energy(translate(mu, 1.0, -2.0)).total, energy(mu).total, 1e-14);
  EXPECT_NEAR(energy(prepend_stem(mu, 0.3)).total, energy(mu).total + 0.3, 1e-14);
  const TransportTree m = mirror_time(mu);
  EXPECT_EQ(m.horizon().begin, -mu.horizon().end);
  EXPECT_EQ(mirror_time(m), mu);
  const TransportTree parts[2] = {translate(mu, 0.0, -1.0), translate(mu, 0.0, 1.0)};
  EXPECT_EQ(combine(parts).size(), 2 * mu.size());
}

TEST(TraceMass, ConservedAtEveryTime) {
  const TransportTree mu = build_mu_star(9);
  for (int i = 0; i <= 200; ++i) {
    const double s = mu.horizon().end * i / 200.0;
    EXPECT_NEAR(total_mass(trace_at(mu, s)), 1.0, 1e-12);
  }
}

TEST(Holder, Examples) {
  const TransportTree mu = build_mu_star(10);
  const HolderCheck same = holder_check(mu, 0.1, 0.1);
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_EQ(same.rhs, 0.0);
  EXPECT_TRUE(same.ok);
  EXPECT_TRUE(holder_check(mu, 0.0, branching_time(2)).ok);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, mu.horizon().end);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(holder_check(mu, U(rng), U(rng)).ok);
}

TEST(TreeIo, JsonRoundTripIsExact) {
  const TransportTree t = optimal_tree(0.4, 0.7, 0.3, 5);
  const std::string text = tree_to_json(t, energy(t));
  EXPECT_EQ(tree_from_json(text), t);
  EXPECT_EQ(tree_to_json(tree_from_json(text), energy(t)), text);
  EXPECT_THROW(tree_from_json("{\"horizon\":[0]}"), PreconditionError);
}

TEST(TreeIo, SvgHasOneLinePerBranch) {
  const std::string svg = tree_to_svg(build_mu_star(6));
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<line"); p != std::string::npos; p = svg.find("<line", p + 1)) ++lines;
  EXPECT_EQ(lines, 126u);
}
