#include "branched/selfsimilar.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "branched/errors.hpp"

namespace branched {

namespace {

const double kSqrt2 = std::sqrt(2.0);
// 1/(2 - sqrt 2) = 1 + sqrt(2)/2, without the cancellation in the denominator.
const double kInvTwoMinusSqrt2 = 1.0 + 0.5 * kSqrt2;
// Fraction of the remaining distance to the barycenter covered per level.
const double kLambda = 1.0 - std::pow(2.0, -1.5);

void require_depth(int depth) {
  if (depth < 1) throw PreconditionError("depth must be at least 1");
}

// Per-level energies of mu*. With S_k the mean squared distance between the
// atoms at t_k and their target barycenters, S_k = (4^{-k} - 8^{-k})/16 and
// level k costs 2^k (t_k - t_{k-1}) in length and
// (S_{k-1} + 4^{-(k+1)}) (t_k - t_{k-1}) / (1/4 - t_{k-1})^2 in kinetic energy.
double level_length(int k) { return 0.25 * (2.0 * kSqrt2 - 1.0) * std::pow(2.0, -0.5 * k); }

double level_kinetic(int k) {
  return kLambda / kSqrt2 * (std::pow(2.0, -0.5 * k) - std::pow(2.0, -1.5 * k));
}

double rounding_allowance(double limit) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::abs(limit);
}

void require_regime(double T, double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) throw PreconditionError("mass phi must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionError("horizon T must be positive");
  const double effective = T / (phi * std::sqrt(phi));
  if (effective < 0.25) {
    throw RegimeError("T * phi^(-3/2) = " + std::to_string(effective) +
                      " < 1/4: outside the regime where the self-similar tree is optimal");
  }
}

}  // namespace

double closed_form_energy(double T) { return kInvTwoMinusSqrt2 + T; }

double branching_time(int k) {
  if (k < 0) throw PreconditionError("branching index must be nonnegative");
  return 0.25 - 0.25 * std::pow(2.0, -1.5 * k);
}

double barycenter_interval(int k, long long i) {
  if (k < 0 || k > 62) throw PreconditionError("generation out of range");
  const long long count = 1LL << k;
  if (i < 1 || i > count) {
    throw PreconditionError("interval index " + std::to_string(i) + " outside 1.." + std::to_string(count));
  }
  const double width = std::ldexp(1.0, -k);
  return -0.5 + static_cast<double>(i - 1) * width + 0.5 * width;
}

TransportTree build_mu_star(int depth) {
  require_depth(depth);
  if (depth > kMaxMaterializedDepth) {
    throw PreconditionError("depth " + std::to_string(depth) + " exceeds the materialization cap " +
                            std::to_string(kMaxMaterializedDepth));
  }
  std::vector<Branch> branches;
  branches.reserve((std::size_t{1} << (depth + 1)) - 2);
  std::vector<double> parents{0.0};
  for (int k = 1; k <= depth; ++k) {
    const double t_prev = branching_time(k - 1);
    const double t_next = branching_time(k);
    const double lambda = (t_next - t_prev) / (0.25 - t_prev);
    const double mass = std::ldexp(1.0, -k);
    std::vector<double> next(parents.size() * 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double from = parents[i / 2];
      const double target = barycenter_interval(k, static_cast<long long>(i) + 1);
      next[i] = from + lambda * (target - from);
      branches.push_back({mass, t_prev, t_next, from, next[i]});
    }
    parents = std::move(next);
  }
  return TransportTree(std::move(branches), {0.0, branching_time(depth)});
}

TruncatedEnergy mu_star_energy(int depth) {
  require_depth(depth);
  TruncatedEnergy e;
  for (int k = 1; k <= depth; ++k) {
    e.truncated.length_term += level_length(k);
    e.truncated.kinetic_term += level_kinetic(k);
  }
  e.truncated.total = e.truncated.length_term + e.truncated.kinetic_term;
  e.limit = closed_form_energy(0.25);
  const double r = 1.0 / kSqrt2;
  const double r3 = std::pow(2.0, -1.5);
  const double g1 = std::pow(2.0, -0.5 * (depth + 1)) / (1.0 - r);
  const double g3 = std::pow(2.0, -1.5 * (depth + 1)) / (1.0 - r3);
  const double length_tail = 0.25 * (2.0 * kSqrt2 - 1.0) * g1;
  const double kinetic_tail = kLambda / kSqrt2 * (g1 - g3);
  e.tail = length_tail + kinetic_tail + rounding_allowance(e.limit);
  return e;
}

TransportTree optimal_tree(double T, double phi, double X, int depth) {
  require_regime(T, phi);
  const double s = phi * std::sqrt(phi);
  const TransportTree scaled = rescale_mass_time(build_mu_star(depth), phi);
  const TransportTree stemmed = prepend_stem(scaled, std::max(0.0, T - 0.25 * s));
  return shear(stemmed, X, T);
}

TruncatedEnergy optimal_tree_energy(double T, double phi, double X, int depth) {
  require_regime(T, phi);
  const TruncatedEnergy base = mu_star_energy(depth);
  const double s = phi * std::sqrt(phi);
  const double gap = s * (0.25 - branching_time(depth));
  const double t_end = T - gap;
  const double drift = phi * X * X / (T * T);
  TruncatedEnergy e;
  e.truncated.length_term = std::max(0.0, T - 0.25 * s) + s * base.truncated.length_term;
  e.truncated.kinetic_term = s * base.truncated.kinetic_term + drift * t_end;
  e.truncated.total = e.truncated.length_term + e.truncated.kinetic_term;
  e.limit = s * kInvTwoMinusSqrt2 + T + phi * X * X / T;
  e.tail = s * base.tail + drift * gap + rounding_allowance(e.limit);
  return e;
}

BranchCount select_branch_count(double T) {
  if (!(T >= 0.25)) {
    throw RegimeError("T = " + std::to_string(T) + " < 1/4: branch count only analyzed for T >= 1/4");
  }
  BranchCount bc;
  const double y = 2.0 * T * (2.0 - kSqrt2);
  bc.x_opt = 1.0 / std::cbrt(y * y);
  bc.stated_threshold = 1.0 / (4.0 * (2.0 * kSqrt2 - 2.0));
  bc.switch_threshold = 0.5;
  const auto cost = [T](double n) { return kInvTwoMinusSqrt2 / std::sqrt(n) + n * T; };
  const double lo = std::max(1.0, std::floor(bc.x_opt));
  const double hi = std::max(1.0, std::ceil(bc.x_opt));
  bc.N = static_cast<int>(cost(hi) < cost(lo) ? hi : lo);
  return bc;
}

TransportTree symmetric_minimizer(double T, int depth) {
  const int N = select_branch_count(T).N;
  const double phi = 1.0 / N;
  const TransportTree piece = optimal_tree(T, phi, 0.0, depth);
  const double t_end = piece.horizon().end;
  std::vector<Branch> branches;
  branches.reserve(2 * N * piece.size());
  for (int i = 0; i < N; ++i) {
    const double c = -0.5 + (i + 0.5) * phi;
    for (const Branch& b : piece.branches()) {
      branches.push_back({b.mass, b.t0, b.t1, b.x0 + c, b.x1 + c});
      branches.push_back({b.mass, -b.t1, -b.t0, b.x1 + c, b.x0 + c});
    }
  }
  return TransportTree(std::move(branches), {-t_end, t_end});
}

TruncatedEnergy symmetric_energy(double T, int depth) {
  const int N = select_branch_count(T).N;
  const TruncatedEnergy piece = optimal_tree_energy(T, 1.0 / N, 0.0, depth);
  const double copies = 2.0 * N;
  TruncatedEnergy e;
  e.truncated.length_term = copies * piece.truncated.length_term;
  e.truncated.kinetic_term = copies * piece.truncated.kinetic_term;
  e.truncated.total = e.truncated.length_term + e.truncated.kinetic_term;
  e.tail = copies * piece.tail;
  e.limit = 2.0 * (kInvTwoMinusSqrt2 / std::sqrt(static_cast<double>(N)) + N * T);
  return e;
}

}  // namespace branched
