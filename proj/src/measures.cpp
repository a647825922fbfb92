#include "branched/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "branched/errors.hpp"

namespace branched {

MassMismatchError::MassMismatchError(double lhs, double rhs)
    : PreconditionError("unequal total masses (fluxes): " + std::to_string(lhs) +
                        " vs " + std::to_string(rhs)),
      lhs_(lhs),
      rhs_(rhs) {}

namespace {

constexpr double kMergeTolerance = 1e-14;

bool same_position(double a, double b) {
  return std::abs(a - b) < kMergeTolerance * std::max(1.0, std::abs(a));
}

void require_equal_mass(double lhs, double rhs) {
  if (std::abs(lhs - rhs) > kMassTolerance * std::max(lhs, rhs)) {
    throw MassMismatchError(lhs, rhs);
  }
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw PreconditionError("atomic measure needs at least one atom");
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.mass) || !(a.mass > 0.0)) {
      throw PreconditionError("atom mass must be positive and finite");
    }
    if (!std::isfinite(a.position)) throw PreconditionError("atom position must be finite");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& l, const Atom& r) { return l.position < r.position; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && same_position(atoms_.back().position, a.position)) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
}

AtomicMeasure AtomicMeasure::dirac(double position, double mass) {
  return AtomicMeasure({Atom{mass, position}});
}

UniformSegment::UniformSegment(double center, double width, double mass)
    : center_(center), width_(width), mass_(mass) {
  if (!std::isfinite(center)) throw PreconditionError("segment center must be finite");
  if (!std::isfinite(width) || !(width > 0.0)) {
    throw PreconditionError("segment width must be positive");
  }
  if (!std::isfinite(mass) || !(mass > 0.0)) {
    throw PreconditionError("segment mass must be positive");
  }
}

double total_mass(const AtomicMeasure& m) {
  double sum = 0.0;
  for (const Atom& a : m.atoms()) sum += a.mass;
  return sum;
}

double total_mass(const UniformSegment& u) { return u.mass(); }

double barycenter(const AtomicMeasure& m) {
  double moment = 0.0;
  for (const Atom& a : m.atoms()) moment += a.mass * a.position;
  return moment / total_mass(m);
}

double barycenter(const UniformSegment& u) { return u.center(); }

double w2_squared(const AtomicMeasure& a, const AtomicMeasure& b) {
  require_equal_mass(total_mass(a), total_mass(b));
  const auto xs = a.atoms();
  const auto ys = b.atoms();
  std::size_t i = 0, j = 0;
  double ra = xs[0].mass;
  double rb = ys[0].mass;
  double cost = 0.0;
  // Two-pointer sweep along the common quantile axis.
  while (i < xs.size() && j < ys.size()) {
    const double d = xs[i].position - ys[j].position;
    if (ra < rb) {
      cost += ra * d * d;
      rb -= ra;
      if (++i < xs.size()) ra = xs[i].mass;
    } else if (rb < ra) {
      cost += rb * d * d;
      ra -= rb;
      if (++j < ys.size()) rb = ys[j].mass;
    } else {
      cost += ra * d * d;
      if (++i < xs.size()) ra = xs[i].mass;
      if (++j < ys.size()) rb = ys[j].mass;
    }
  }
  return cost;
}

double w2_squared(const AtomicMeasure& a, const UniformSegment& u) {
  const double total = total_mass(a);
  require_equal_mass(total, u.mass());
  const auto xs = a.atoms();
  const double density = u.density();
  double cumulative = 0.0;
  double cost = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double lo = u.left() + u.width() * (cumulative / total);
    cumulative += xs[k].mass;
    const double hi =
        (k + 1 == xs.size()) ? u.right() : u.left() + u.width() * (cumulative / total);
    // density * int_lo^hi (y - x)^2 dy, factored to avoid cancellation.
    const double p = lo - xs[k].position;
    const double q = hi - xs[k].position;
    cost += density * (hi - lo) * (p * p + p * q + q * q) / 3.0;
  }
  return cost;
}

}  // namespace branched
