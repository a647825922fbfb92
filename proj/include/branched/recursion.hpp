#pragma once

#include <functional>
#include <span>
#include <vector>

namespace branched {

/// Masses phi_1..phi_N with sum 1 (within 1e-12), each in (0, 1].
/// Stored sorted nondecreasingly, since every quantity below is symmetric.
class Partition {
 public:
  explicit Partition(std::vector<double> masses);

  /// Masses in the order given, without canonical sorting. Only
  /// barycenter_shear_cost depends on order.
  static Partition ordered(std::vector<double> masses);

  std::span<const double> masses() const noexcept { return masses_; }
  int size() const noexcept { return static_cast<int>(masses_.size()); }

  double sum_cubes() const;
  double sum_three_halves() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition(std::vector<double> masses, bool sort);
  std::vector<double> masses_;
};

using EnergyOracle = std::function<double(double)>;

/// E(T) = 1/(2 - sqrt 2) + T; valid for T >= 1/4.
double closed_form_oracle(double T);

/// Checks sum phi_i Xbar_i^2 == (1 - sum phi_i^3)/12 for the blocks laid out
/// left to right in the stored order, and returns the common value.
/// Throws ConsistencyError if they differ by more than 1e-12.
double barycenter_shear_cost(const Partition& p);

/// sum phi_i^{3/2} E(T phi_i^{-3/2}) + (1 - sum phi_i^3)/(12 T).
double recursion_value(double T, const Partition& p, const EnergyOracle& E);

/// ((N - 1) + (1 - sum phi^3)/(12 T^2)) / (1 - sum phi^{3/2}); needs N >= 2.
double j_ratio(double T, const Partition& p);

struct JMinimum {
  Partition partition{std::vector<double>{1.0}};
  double value = 0.0;
};

/// Minimizes j_ratio over N in [2, N_max] and partitions whose masses are
/// multiples of `step` (1/step must be an integer). For each N the ratio is
/// minimized by Dinkelbach iteration; the inner problem is separable and is
/// solved exactly by min_compositions.
JMinimum minimize_j(double T, int N_max, double step);

/// T (N - 1) - (1 - sum phi^3)/(12 T).
double equipartition_residual(double T, const Partition& p);

/// T (1 + (sqrt 2/(sqrt 2 - 1)) (1 + 1/(16 T^2))), the dyadic competitor.
double dyadic_upper_bound(double T);

/// T + W2^2(delta_0, uniform on [-1/2, 1/2]) / T.
double wasserstein_lower_bound(double T);

/// Largest N with sqrt N <= (1/2)(-1 + sqrt(1 + 6/(alpha (sqrt 2 - 1)^2))),
/// never less than 1.
int branch_count_bound(double alpha);

struct TStarWindow {
  double T_minus = 0.0;  // smaller root of T^2 - T/2 + 1/(6 sqrt 2 (sqrt 2 + 1))
  double T_plus = 0.0;   // larger root
  double upper = 0.25;   // T_* <= 1/4
  double a_minus = 0.0;  // 3 sqrt 2 T_minus / (sqrt 2 - 1)
};

TStarWindow t_star_window();

struct SolveOptions {
  double T_min = 0.05;
  double T_max = 2.0;
  double T_step = 0.01;      // uniform spacing above 1/4
  double ratio = 1.01;       // geometric spacing below 1/4
  double mass_step = 1e-2;
  int N_max = 6;
  unsigned workers = 1;
  int max_iterations = 200;
  double tolerance = 1e-12;
};

/// Value-iteration solution of the recursive characterization of E.
struct EnergyCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> exploratory;  // T < 1/4: not characterized analytically
  double closed_form_floor = 0.25;
  int iterations = 0;
  double last_change = 0.0;
  /// max over grid cells below 1/4 of |operator(midpoint) - interpolant(midpoint)|.
  double interpolation_error = 0.0;

  /// Piecewise-linear interpolant; closed form for T >= 1/4.
  double operator()(double T) const;
};

/// For T >= 1/4 the closed form. Below, iterates
///   E(T) = min over grid S <= T of  (T - S) + B(S),
///   B(S) = min over N in [2, N_max], grid partitions p of
///          sum phi^{3/2} E(S phi^{-3/2}) + (1 - sum phi^3)/(12 S),
/// starting from the dyadic upper bound and keeping the pointwise minimum.
EnergyCurve solve_E(const SolveOptions& options);

}  // namespace branched
