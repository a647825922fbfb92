#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "branched/measures.hpp"

namespace branched {

/// One affine mass-carrying segment of a transport tree: mass `mass` travels
/// from (t0, x0) to (t1, x1) at constant speed.
struct Branch {
  double mass = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;

  double duration() const noexcept { return t1 - t0; }
  double speed() const noexcept { return (x1 - x0) / (t1 - t0); }
  double position_at(double s) const noexcept {
    return x0 + (s - t0) / (t1 - t0) * (x1 - x0);
  }

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Horizon {
  double begin = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - begin; }
  friend bool operator==(const Horizon&, const Horizon&) = default;
};

/// A finite set of affine branches living in a time horizon [begin, end].
///
/// The constructor enforces the per-branch invariants (positive mass,
/// t1 > t0, finite coordinates, branch inside the horizon) and throws
/// PreconditionError otherwise. Topological predicates (junction
/// conservation, no interior overlap, trace monotonicity) are reported by
/// validate() instead, so that counterexamples can be represented.
class TransportTree {
 public:
  TransportTree(std::vector<Branch> branches, Horizon horizon);

  std::span<const Branch> branches() const noexcept { return branches_; }
  Horizon horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return branches_.size(); }

  friend bool operator==(const TransportTree&, const TransportTree&) = default;

 private:
  std::vector<Branch> branches_;
  Horizon horizon_;
};

struct EnergyBreakdown {
  double length_term = 0.0;   // sum of branch durations
  double kinetic_term = 0.0;  // sum of mass * dx^2 / dt
  double total = 0.0;
};

EnergyBreakdown energy(const TransportTree& tree);

enum class ViolationKind { Conservation, Overlap, Monotonicity };

struct Violation {
  ViolationKind kind;
  double time = 0.0;
  double position = 0.0;
  double amount = 0.0;  // conservation: |inflow - outflow|; overlap: gap; monotonicity: overlap width
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const noexcept;
};

ValidationReport validate(const TransportTree& tree);

/// Time slice of the tree. A branch owns [t0, t1); at the final time of the
/// horizon the branches ending there own it. Throws PreconditionError if s is
/// outside the horizon or no mass is alive at s.
AtomicMeasure trace_at(const TransportTree& tree, double s);

/// Adds the drift (1 - s/T) * offset to every branch endpoint at time s.
///
/// Preconditions: horizon starts at 0 and ends no later than T; the final
/// trace has barycenter 0. The energy grows by
/// mass * offset^2 * end / T^2 - 2 (offset / T) * mass * (b_end - b_0),
/// b the trace barycenters, which is mass * offset^2 / T for a tree on [0, T]
/// rooted at the origin.
TransportTree shear(const TransportTree& tree, double offset, double horizon_length);

/// t -> phi^{3/2} t, x -> phi x, mass -> phi mass. Energy scales by phi^{3/2}.
TransportTree rescale_mass_time(const TransportTree& tree, double phi);

TransportTree translate(const TransportTree& tree, double dt, double dx);

/// Delays the tree by `duration` and inserts a stationary stem at the root
/// position. The initial trace must be a single atom. Energy grows by exactly
/// `duration`.
TransportTree prepend_stem(const TransportTree& tree, double duration);

/// Reflects time (t -> -t); the horizon [a, b] becomes [-b, -a].
TransportTree mirror_time(const TransportTree& tree);

/// Union of branch sets. All trees must share the same horizon.
TransportTree combine(std::span<const TransportTree> trees);

struct HolderCheck {
  double lhs = 0.0;  // W2^2(trace(s), trace(s'))
  double rhs = 0.0;  // energy * |s - s'|
  bool ok = false;
};

HolderCheck holder_check(const TransportTree& tree, double s, double s_prime);

}  // namespace branched
