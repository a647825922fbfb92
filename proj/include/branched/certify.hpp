#pragma once

#include <vector>

#include "branched/report.hpp"

namespace branched {

/// (1 - (N-1)phi^3 - (1-(N-1)phi)^3) / (1 - (N-1)phi^{3/2} - (1-(N-1)phi)^{3/2})
/// on (0, 1/N]; returns the limit 2 at phi = 0.
double f_N(int N, double phi);

/// 1 - (N-1)phi^{3/2} - (1-(N-1)phi)^{3/2}, the denominator of f_N.
double g_N(int N, double phi);

/// Closed-form derivative of f_N. Throws PreconditionError at phi = 0.
double f_prime_N(int N, double phi);

/// -phi^2 + (1-(N-1)phi)^2 + (1/2)(phi^{1/2} - (1-(N-1)phi)^{1/2}) f_N(phi),
/// which has the sign of f_prime_N wherever g_N > 0.
double h_N(int N, double phi);

/// Plateau value of f_N near 0 and the right end of the certified monotone
/// region used for every N in 3..6.
inline constexpr double kEta = 1.0 / 540.0;
inline constexpr double kLambda = 1.2e5;
inline constexpr double kPaperDelta = 1e-6;

/// 6/((sqrt 2 - 1)^2 (2 sqrt N + 1)^2): alpha_N above this excludes N branches.
double alpha_threshold(int N);

struct Alpha2Certificate {
  double value = 2.0;
  double root_residual[4] = {0, 0, 0, 0};  // P at -1/sqrt2, 0, 1/sqrt2, 1
  double min_P_interior = 0.0;             // min of P on a grid of (0, 1/sqrt 2)
  double min_f2 = 0.0;                     // min of the two-mass ratio on (0, 1/2]
};

/// alpha_2 = 2 from P(X) = 2X^4 - 2X^3 - X^2 + X. Throws CertificateError when
/// a root residual exceeds 1e-12 or P is not positive on the open interval.
Alpha2Certificate alpha2_certificate(int samples = 100000);

struct MonotoneRegion {
  double eta = kEta;
  double square_condition = 0.0;  // (8/(1+16(N-1)))^2
  double linear_condition = 0.0;  // 1/(108(N-1))
  double min_h = 0.0;             // min of h_N over samples in (0, eta]
  double min_h_minus_chain = 0.0; // min of h_N - ((1/36)phi^{1/2} - 3(N-1)phi)
  double min_chain = 0.0;         // min of (1/36)phi^{1/2} - 3(N-1)phi on (0, eta]
  std::vector<CheckResult> inequalities;  // sampled intermediate bounds
};

/// Checks eta <= both sufficient conditions, samples h_N > 0 on (0, eta] and
/// the intermediate inequalities on their stated domain. Throws
/// CertificateError if any of those fail. The last link of the chain
/// ((1/36)phi^{1/2} - 3(N-1)phi >= 0) is reported in min_chain, not enforced.
MonotoneRegion monotone_region_eta(int N, int samples = 1000);

struct LipschitzBound {
  double Lambda = kLambda;
  double g_at_eta = 0.0;
  double g_at_inv_N = 0.0;
  double g_min = 0.0;
  bool paper_floor_holds = false;  // g_min >= 1.3e-2
  double derived_bound = 0.0;      // 3(N-1)/g_min (1 + 1/(2 g_min)) >= sup |f_N'|
};

/// Returns Lambda = 1.2e5 after checking that the bound derived from the
/// endpoint minimum of g_N does not exceed it (CertificateError otherwise).
LipschitzBound lipschitz_Lambda(int N);

struct CertifiedBound {
  int N = 0;
  double delta = 0.0;
  long long evaluations = 0;
  double grid_min = 0.0;
  double grid_argmin = 0.0;
  double alpha_estimate = 0.0;  // min(2, grid_min)
  double slack = 0.0;           // Lambda delta / 2
  double certified_lower = 0.0; // alpha_estimate - slack
  double threshold = 0.0;
  double margin = 0.0;          // certified_lower - threshold
  bool verdict = false;
};

/// Grid minimum of f_N over [eta, 1/N] at step delta (the right end is always
/// included), reduced with ties to the smallest phi.
CertifiedBound certify_alpha_lower(int N, double delta = kPaperDelta, unsigned workers = 1);

struct SimplexMinimum {
  double value = 0.0;
  std::vector<double> argmin;
  long long evaluations = 0;
  double face_min = 0.0;  // over grid points with at least one zero mass
};

/// (1 - sum phi^3)/(1 - sum phi^{3/2}) over every point of the simplex grid
/// with spacing `step` except the vertices. N in {3, 4}.
SimplexMinimum simplex_bruteforce_alpha(int N, double step);

struct TwoValueReport {
  double alpha = 0.0;
  double critical_point = 0.0;   // (alpha/8)^{1/3}
  int positive_roots = 0;        // sign changes of 4X^3 - alpha/2 on (0, 2]
  std::vector<double> argmin;
  int distinct_values = 0;       // in argmin, within 1e-6
  std::vector<CheckResult> checks;
};

TwoValueReport two_value_reduction_check(int N, double step = 1e-2);

// N = 2 endgame, in the variable a = 3 sqrt 2 T/(sqrt 2 - 1).
double neq2_L(double a, double phi);
double neq2_R(double a, double phi);
double neq2_D(double a, double phi);
double quartic_definition(double a, double X);  // (1 - 2X^2 + aX)^2 - a^2 (1 - X^2)
double quartic_expanded(double a, double X);
double quartic_factored(double a, double X);
double root_X_minus(double a);
double root_X_plus(double a);
double neq2_Psi(double a);
double a_of_T(double T);
double a_max();

struct Neq2Options {
  int factor_grid = 200;
  int psi_points = 1000;
  int global_T = 1000;
  int global_phi = 1000;
};

/// Every check of the N = 2 endgame, each with its worst value and location.
std::vector<CheckResult> neq2_suite(const Neq2Options& options = {});

}  // namespace branched
