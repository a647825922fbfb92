#pragma once

#include "branched/tree.hpp"

namespace branched {

/// 1/(2 - sqrt 2) + T, the minimal energy for T >= 1/4 (unit mass, centered).
double closed_form_energy(double T);

/// t_k = (1/4)(1 - 2^{-3k/2}).
double branching_time(int k);

/// Center of the i-th dyadic interval of generation k in [-1/2, 1/2],
/// i in 1..2^k. Throws PreconditionError when i is out of range.
double barycenter_interval(int k, long long i);

/// Deepest truncation that build_mu_star and optimal_tree will materialize
/// (2^{K+1} - 2 branches). Deeper energies come from the analytic level sums.
inline constexpr int kMaxMaterializedDepth = 20;

/// The dyadic self-similar tree truncated at depth K: 2^k branches of mass
/// 2^{-k} on [t_{k-1}, t_k] for k = 1..K. Horizon [0, t_K].
TransportTree build_mu_star(int depth);

/// Energy of the depth-K truncation together with the exact energy of the
/// omitted levels (plus a rounding allowance), so that
/// truncated.total <= limit <= truncated.total + tail.
struct TruncatedEnergy {
  EnergyBreakdown truncated;
  double tail = 0.0;
  double limit = 0.0;
};

TruncatedEnergy mu_star_energy(int depth);

/// Stem of duration T - phi^{3/2}/4, then the phi-rescaled mu*, sheared by X
/// over the horizon T. Horizon [0, T - phi^{3/2}(1/4 - t_K)].
/// Throws RegimeError if T phi^{-3/2} < 1/4.
TransportTree optimal_tree(double T, double phi, double X, int depth);

/// Analytic counterpart of energy(optimal_tree(...)); works for any depth.
/// limit = phi^{3/2}/(2 - sqrt 2) + T + phi X^2 / T.
TruncatedEnergy optimal_tree_energy(double T, double phi, double X, int depth);

struct BranchCount {
  int N = 1;
  double x_opt = 0.0;
  /// T at which the direct minimization switches from N = 2 to N = 1.
  double switch_threshold = 0.5;
  /// The threshold as printed with the theorem, 1/(4(2 sqrt 2 - 2)).
  double stated_threshold = 0.0;
};

/// argmin over integers N >= 1 of N^{-1/2}/(2 - sqrt 2) + N T, evaluated at
/// the floor and ceiling of x_opt; ties go to the smaller N.
/// Throws RegimeError for T < 1/4.
BranchCount select_branch_count(double T);

/// N copies of optimal_tree(T, 1/N, 0, K) centered on the intervals of
/// length 1/N, together with their mirror image in time. Horizon
/// [-T_end, T_end] where T_end is the truncated horizon of each copy.
TransportTree symmetric_minimizer(double T, int depth);

/// limit = 2 (N^{-1/2}/(2 - sqrt 2) + N T).
TruncatedEnergy symmetric_energy(double T, int depth);

}  // namespace branched
