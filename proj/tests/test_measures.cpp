#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "branched/errors.hpp"
#include "branched/measures.hpp"

using namespace branched;

namespace {

// Independent oracle: W2^2 between two atomic measures by sweeping the
// quantile functions on a fine uniform grid of levels (midpoint rule).
double quantile_oracle(const AtomicMeasure& a, const AtomicMeasure& b, int levels) {
  auto quantile = [](const AtomicMeasure& m, double q) {
    double acc = 0.0;
    for (const Atom& x : m.atoms()) {
      acc += x.mass;
      if (q < acc) return x.position;
    }
    return m.atoms().back().position;
  };
  double sum = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double q = (i + 0.5) / levels;
    const double d = quantile(a, q) - quantile(b, q);
    sum += d * d;
  }
  return sum / levels;
}

AtomicMeasure midpoint_discretization(const UniformSegment& u, int n) {
  std::vector<Atom> pts;
  for (int i = 0; i < n; ++i) pts.push_back({u.mass() / n, u.left() + u.width() * (i + 0.5) / n});
  return AtomicMeasure(pts);
}

}  // namespace

TEST(TotalMass, Examples) {
  EXPECT_DOUBLE_EQ(total_mass(AtomicMeasure::dirac(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(total_mass(AtomicMeasure({{0.5, -0.25}, {0.5, 0.25}})), 1.0);
  EXPECT_DOUBLE_EQ(total_mass(UniformSegment(0.0, 1.0, 1.0)), 1.0);
}

TEST(Barycenter, Examples) {
  EXPECT_DOUBLE_EQ(barycenter(UniformSegment(0.0, 1.0, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(barycenter(AtomicMeasure({{0.5, -0.25}, {0.5, 0.25}})), 0.0);
  EXPECT_DOUBLE_EQ(barycenter(AtomicMeasure({{0.25, 0.0}, {0.75, 1.0}})), 0.75);
}

TEST(AtomicMeasure, RejectsBadAtoms) {
  EXPECT_THROW(AtomicMeasure({}), PreconditionError);
  EXPECT_THROW(AtomicMeasure({{0.0, 1.0}}), PreconditionError);
  EXPECT_THROW(AtomicMeasure({{-1.0, 1.0}}), PreconditionError);
  EXPECT_THROW(AtomicMeasure({{1.0, NAN}}), PreconditionError);
  EXPECT_THROW(UniformSegment(0.0, 0.0, 1.0), PreconditionError);
}

TEST(AtomicMeasure, SortsAndMerges) {
  const AtomicMeasure m({{0.25, 1.0}, {0.5, 0.0}, {0.25, 1.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.atoms()[0].position, 0.0);
  EXPECT_DOUBLE_EQ(m.atoms()[1].mass, 0.5);
}

TEST(W2Atomic, Examples) {
  EXPECT_DOUBLE_EQ(w2_squared(AtomicMeasure::dirac(0.0), AtomicMeasure::dirac(1.0)), 1.0);
  const AtomicMeasure a({{0.3, -1.0}, {0.7, 2.0}});
  EXPECT_EQ(w2_squared(a, a), 0.0);
  const AtomicMeasure fwd({{0.5, 0.0}, {0.5, 1.0}});
  const AtomicMeasure rev({{0.5, 1.0}, {0.5, 0.0}});
  EXPECT_EQ(w2_squared(fwd, rev), 0.0);
}

TEST(W2Atomic, MassMismatchThrows) {
  EXPECT_THROW(w2_squared(AtomicMeasure::dirac(0.0), AtomicMeasure::dirac(0.0, 1.1)), MassMismatchError);
  EXPECT_THROW(w2_squared(AtomicMeasure::dirac(0.0), UniformSegment(0.0, 1.0, 0.5)), MassMismatchError);
}

TEST(W2Atomic, MatchesQuantileOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    // Masses on a 1/64 lattice so that the level grid resolves every breakpoint.
    auto make = [&](int n) {
      std::vector<int> units(n, 1);
      for (int k = n; k < 64; ++k) ++units[rng() % n];
      std::vector<Atom> atoms;
      for (int i = 0; i < n; ++i) atoms.push_back({units[i] / 64.0, -2.0 + 4.0 * U(rng)});
      return AtomicMeasure(atoms);
    };
    const AtomicMeasure a = make(1 + static_cast<int>(rng() % 6));
    const AtomicMeasure b = make(1 + static_cast<int>(rng() % 6));
    EXPECT_NEAR(w2_squared(a, b), quantile_oracle(a, b, 64 * 16), 1e-12);
  }
}

TEST(W2Atomic, SymmetricAndCovariant) {
  const AtomicMeasure a({{0.2, -0.4}, {0.5, 0.1}, {0.3, 0.9}});
  const AtomicMeasure b({{0.6, 0.0}, {0.4, 1.5}});
  EXPECT_DOUBLE_EQ(w2_squared(a, b), w2_squared(b, a));
  const AtomicMeasure a2({{0.2, 2.6}, {0.5, 3.1}, {0.3, 3.9}});
  const AtomicMeasure b2({{0.6, 3.0}, {0.4, 4.5}});
  EXPECT_NEAR(w2_squared(a2, b2), w2_squared(a, b), 1e-12);
  const AtomicMeasure a3({{0.2, -0.8}, {0.5, 0.2}, {0.3, 1.8}});
  const AtomicMeasure b3({{0.6, 0.0}, {0.4, 3.0}});
  EXPECT_NEAR(w2_squared(a3, b3), 4.0 * w2_squared(a, b), 1e-12);
}

TEST(W2Uniform, Examples) {
  EXPECT_NEAR(w2_squared(AtomicMeasure::dirac(0.0), UniformSegment(0.0, 1.0, 1.0)), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(w2_squared(AtomicMeasure({{0.5, -0.25}, {0.5, 0.25}}), UniformSegment(0.0, 1.0, 1.0)), 1.0 / 48.0,
              1e-15);
  const double c = 0.7, w = 2.5, m = 3.0;
  EXPECT_NEAR(w2_squared(AtomicMeasure::dirac(c, m), UniformSegment(c, w, m)), m * w * w / 12.0, 1e-14);
}

TEST(W2Uniform, MidpointRefinementConvergesQuadratically) {
  const AtomicMeasure a({{0.125, -0.6}, {0.375, -0.1}, {0.25, 0.2}, {0.25, 0.7}});
  const UniformSegment u(0.1, 1.3, 1.0);
  const double exact = w2_squared(a, u);
  const double e3 = std::abs(w2_squared(a, midpoint_discretization(u, 1000)) - exact);
  const double e4 = std::abs(w2_squared(a, midpoint_discretization(u, 10000)) - exact);
  // Atom boundaries fall on cell edges here, so the error is the pure
  // midpoint term mass * (width/n)^2 / 12.
  EXPECT_NEAR(e3, 1.3 * 1.3 / 12.0 / 1e6, 1e-12);
  EXPECT_NEAR(e4, 1.3 * 1.3 / 12.0 / 1e8, 1e-13);
  EXPECT_GT(e3 / e4, 90.0);
}
