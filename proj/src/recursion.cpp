#include "branched/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "branched/composition.hpp"
#include "branched/errors.hpp"
#include "branched/measures.hpp"
#include "branched/parallel.hpp"
#include "branched/selfsimilar.hpp"

namespace branched {

namespace {

const double kSqrt2 = std::sqrt(2.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

int units_for_step(double step) {
  if (!(step > 0.0) || step > 1.0) throw PreconditionError("mass step must lie in (0, 1]");
  const double n = std::round(1.0 / step);
  if (std::abs(n * step - 1.0) > 1e-9) throw PreconditionError("1/step must be an integer");
  return static_cast<int>(n);
}

Partition from_units(const std::vector<int>& parts, int units) {
  std::vector<double> masses;
  masses.reserve(parts.size());
  for (int u : parts) masses.push_back(static_cast<double>(u) / units);
  return Partition(std::move(masses));
}

}  // namespace

std::vector<Composition> min_compositions(int units, int max_parts, std::span<const double> cost) {
  if (units < 1 || max_parts < 1) throw PreconditionError("compositions need units, parts >= 1");
  if (static_cast<int>(cost.size()) < units + 1) throw PreconditionError("cost table too short");
  // best[j][r]: cheapest split of r units into j parts; choice[j][r]: last part.
  const std::size_t width = static_cast<std::size_t>(units) + 1;
  std::vector<double> best(static_cast<std::size_t>(max_parts + 1) * width, kInf);
  std::vector<int> choice(best.size(), 0);
  auto at = [width](int j, int r) { return static_cast<std::size_t>(j) * width + static_cast<std::size_t>(r); };
  best[at(0, 0)] = 0.0;
  for (int j = 1; j <= max_parts; ++j) {
    for (int r = j; r <= units; ++r) {
      double b = kInf;
      int c = 0;
      for (int u = 1; u <= r - (j - 1); ++u) {
        const double prev = best[at(j - 1, r - u)];
        if (prev == kInf) continue;
        const double v = prev + cost[static_cast<std::size_t>(u)];
        if (v < b) {
          b = v;
          c = u;
        }
      }
      best[at(j, r)] = b;
      choice[at(j, r)] = c;
    }
  }
  std::vector<Composition> out(static_cast<std::size_t>(max_parts));
  for (int N = 1; N <= max_parts; ++N) {
    Composition& comp = out[static_cast<std::size_t>(N - 1)];
    comp.value = best[at(N, units)];
    if (comp.value == kInf) continue;
    int r = units;
    for (int j = N; j >= 1; --j) {
      const int u = choice[at(j, r)];
      comp.parts.push_back(u);
      r -= u;
    }
    std::sort(comp.parts.begin(), comp.parts.end());
  }
  return out;
}

Partition::Partition(std::vector<double> masses) : Partition(std::move(masses), true) {}

Partition Partition::ordered(std::vector<double> masses) { return Partition(std::move(masses), false); }

Partition::Partition(std::vector<double> masses, bool sort) : masses_(std::move(masses)) {
  if (masses_.empty()) throw PreconditionError("partition needs at least one mass");
  double sum = 0.0;
  for (double m : masses_) {
    if (!(m > 0.0) || m > 1.0 + 1e-12) throw PreconditionError("partition masses must lie in (0, 1]");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw PreconditionError("partition masses must sum to 1 (got " + std::to_string(sum) + ")");
  }
  if (sort) std::sort(masses_.begin(), masses_.end());
}

double Partition::sum_cubes() const {
  double s = 0.0;
  for (double m : masses_) s += m * m * m;
  return s;
}

double Partition::sum_three_halves() const {
  double s = 0.0;
  for (double m : masses_) s += m * std::sqrt(m);
  return s;
}

double closed_form_oracle(double T) {
  if (T < 0.25) throw RegimeError("closed form E(T) only holds for T >= 1/4");
  return closed_form_energy(T);
}

double barycenter_shear_cost(const Partition& p) {
  double left = -0.5;
  double moment = 0.0;
  for (double m : p.masses()) {
    const double center = left + 0.5 * m;
    moment += m * center * center;
    left += m;
  }
  const double closed = (1.0 - p.sum_cubes()) / 12.0;
  if (std::abs(moment - closed) > 1e-12) {
    throw ConsistencyError("barycenter identity violated: " + std::to_string(moment) + " vs " +
                           std::to_string(closed));
  }
  return closed;
}

double recursion_value(double T, const Partition& p, const EnergyOracle& E) {
  if (!(T > 0.0)) throw PreconditionError("recursion needs T > 0");
  double sum = 0.0;
  for (double m : p.masses()) {
    const double s = m * std::sqrt(m);
    sum += s * E(T / s);
  }
  return sum + (1.0 - p.sum_cubes()) / (12.0 * T);
}

double j_ratio(double T, const Partition& p) {
  if (p.size() < 2) throw PreconditionError("j ratio needs at least two masses");
  if (!(T > 0.0)) throw PreconditionError("j ratio needs T > 0");
  const double num = (p.size() - 1) + (1.0 - p.sum_cubes()) / (12.0 * T * T);
  return num / (1.0 - p.sum_three_halves());
}

JMinimum minimize_j(double T, int N_max, double step) {
  if (!(T > 0.0)) throw PreconditionError("minimize_j needs T > 0");
  if (N_max < 2) throw PreconditionError("minimize_j needs N_max >= 2");
  const int n = units_for_step(step);
  const double shear_weight = 1.0 / (12.0 * T * T);
  std::vector<double> cost(static_cast<std::size_t>(n) + 1, 0.0);

  JMinimum best;
  bool have = false;
  for (int N = 2; N <= std::min(N_max, n); ++N) {
    // Dinkelbach: lambda_{k+1} = j(p_k), p_k = argmin A(p) - lambda_k B(p).
    std::vector<int> start(static_cast<std::size_t>(N), n / N);
    for (int i = 0; i < n % N; ++i) ++start[static_cast<std::size_t>(N - 1 - i)];
    Partition current = from_units(start, n);
    double lambda = j_ratio(T, current);
    for (int iter = 0; iter < 100; ++iter) {
      for (int u = 1; u <= n; ++u) {
        const double phi = static_cast<double>(u) / n;
        cost[static_cast<std::size_t>(u)] = lambda * phi * std::sqrt(phi) - shear_weight * phi * phi * phi;
      }
      const auto comps = min_compositions(n, N, cost);
      const Partition candidate = from_units(comps[static_cast<std::size_t>(N - 1)].parts, n);
      const double value = j_ratio(T, candidate);
      if (!(value < lambda)) break;
      lambda = value;
      current = candidate;
    }
    const bool better = !have || lambda < best.value ||
                        (lambda == best.value &&
                         std::lexicographical_compare(current.masses().begin(), current.masses().end(),
                                                      best.partition.masses().begin(),
                                                      best.partition.masses().end()));
    if (better) {
      best.partition = current;
      best.value = lambda;
      have = true;
    }
  }
  return best;
}

double equipartition_residual(double T, const Partition& p) {
  return T * (p.size() - 1) - (1.0 - p.sum_cubes()) / (12.0 * T);
}

double dyadic_upper_bound(double T) {
  if (!(T > 0.0)) throw PreconditionError("bound needs T > 0");
  // sqrt 2/(sqrt 2 - 1) = 2 + sqrt 2.
  return T * (1.0 + (2.0 + kSqrt2) * (1.0 + 1.0 / (16.0 * T * T)));
}

double wasserstein_lower_bound(double T) {
  if (!(T > 0.0)) throw PreconditionError("bound needs T > 0");
  static const double spread = w2_squared(AtomicMeasure::dirac(0.0), UniformSegment(0.0, 1.0, 1.0));
  return T + spread / T;
}

int branch_count_bound(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
  const double q = (kSqrt2 - 1.0) * (kSqrt2 - 1.0);
  const double r = 0.5 * (-1.0 + std::sqrt(1.0 + 6.0 / (alpha * q)));
  if (!(r > 0.0) || !std::isfinite(r)) return 1;
  long long N = static_cast<long long>(std::floor(r * r));
  while (std::sqrt(static_cast<double>(N + 1)) <= r) ++N;
  while (N > 1 && std::sqrt(static_cast<double>(N)) > r) --N;
  return static_cast<int>(std::max(1LL, N));
}

TStarWindow t_star_window() {
  TStarWindow w;
  const double root = std::sqrt(1.0 - (4.0 / 3.0) * (2.0 - kSqrt2));
  w.T_minus = 0.25 * (1.0 - root);
  w.T_plus = 0.25 * (1.0 + root);
  w.upper = 0.25;
  w.a_minus = 3.0 * kSqrt2 * w.T_minus / (kSqrt2 - 1.0);
  return w;
}

double EnergyCurve::operator()(double T) const {
  if (T >= closed_form_floor) return closed_form_energy(T);
  if (grid.empty() || T < grid.front()) {
    throw PreconditionError("T = " + std::to_string(T) + " below the solved grid");
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), T);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  if (hi == 0) return values.front();
  if (hi >= grid.size()) return values.back();
  const std::size_t lo = hi - 1;
  const double w = (T - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

namespace {

// One application of the Bellman operator at horizon S (branching now).
double branch_now(double S, const EnergyCurve& E, int N_max, int n, std::vector<double>& cost) {
  for (int u = 1; u < n; ++u) {
    const double phi = static_cast<double>(u) / n;
    const double s = phi * std::sqrt(phi);
    cost[static_cast<std::size_t>(u)] = s * E(S / s) - phi * phi * phi / (12.0 * S);
  }
  // A single part would be the whole mass waiting, handled by the outer min.
  cost[static_cast<std::size_t>(n)] = kInf;
  const auto comps = min_compositions(n, N_max, cost);
  double best = kInf;
  for (int N = 2; N <= N_max && N <= n; ++N) best = std::min(best, comps[static_cast<std::size_t>(N - 1)].value);
  return best + 1.0 / (12.0 * S);
}

}  // namespace

namespace {

// 1/4 + k step, computed as a single division when 1/step is an integer so
// that points such as 0.3 come out as the nearest double.
double grid_point_above_quarter(long long k, double step) {
  const double inv = std::round(1.0 / step);
  const double base = 0.25 * inv;
  if (std::abs(inv * step - 1.0) <= 1e-12 && base == std::floor(base)) return (base + static_cast<double>(k)) / inv;
  return 0.25 + static_cast<double>(k) * step;
}

}  // namespace

EnergyCurve solve_E(const SolveOptions& o) {
  if (!(o.T_min > 0.0) || !(o.T_max > o.T_min)) throw PreconditionError("need 0 < T_min < T_max");
  if (!(o.T_step > 0.0) || !(o.ratio > 1.0)) throw PreconditionError("grid steps must be positive");
  if (o.N_max < 2) throw PreconditionError("N_max must be at least 2");
  const int n = units_for_step(o.mass_step);

  EnergyCurve curve;
  std::vector<double> below;
  for (double t = 0.25 / o.ratio; t > o.T_min * (1.0 + 1e-12); t /= o.ratio) below.push_back(t);
  if (o.T_min < 0.25) below.push_back(o.T_min);
  std::reverse(below.begin(), below.end());
  curve.grid = below;
  for (long long k = 0;; ++k) {
    const double t = grid_point_above_quarter(k, o.T_step);
    if (t > o.T_max * (1.0 + 1e-12)) break;
    curve.grid.push_back(t);
  }
  const std::size_t m = below.size();
  for (double t : curve.grid) {
    curve.values.push_back(t < 0.25 ? dyadic_upper_bound(t) : closed_form_energy(t));
    curve.lower.push_back(wasserstein_lower_bound(t));
    curve.upper.push_back(dyadic_upper_bound(t));
    curve.exploratory.push_back(t < 0.25);
  }
  if (m == 0) return curve;

  std::vector<double> branch(m, kInf);
  for (int iter = 0; iter < o.max_iterations; ++iter) {
    parallel_for(m, o.workers, [&](std::size_t i) {
      std::vector<double> cost(static_cast<std::size_t>(n) + 1, 0.0);
      branch[i] = branch_now(curve.grid[i], curve, o.N_max, n, cost);
    });
    double change = 0.0;
    std::vector<double> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      double v = curve.values[i];
      for (std::size_t j = 0; j <= i; ++j) v = std::min(v, curve.grid[i] - curve.grid[j] + branch[j]);
      next[i] = v;
      change = std::max(change, curve.values[i] - v);
    }
    std::copy(next.begin(), next.end(), curve.values.begin());
    curve.iterations = iter + 1;
    curve.last_change = change;
    if (change <= o.tolerance) break;
  }

  std::vector<double> err(m, 0.0);
  parallel_for(m, o.workers, [&](std::size_t i) {
    const double hi = i + 1 < m ? curve.grid[i + 1] : 0.25;
    const double mid = 0.5 * (curve.grid[i] + hi);
    std::vector<double> cost(static_cast<std::size_t>(n) + 1, 0.0);
    double v = curve(curve.grid[i]) + (mid - curve.grid[i]);
    v = std::min(v, branch_now(mid, curve, o.N_max, n, cost));
    err[i] = std::abs(v - curve(mid));
  });
  curve.interpolation_error = *std::max_element(err.begin(), err.end());
  return curve;
}

}  // namespace branched
