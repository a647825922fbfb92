#include "branched/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "branched/errors.hpp"
#include "branched/parallel.hpp"
#include "branched/recursion.hpp"

namespace branched {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kQ = (kSqrt2 - 1.0) * (kSqrt2 - 1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_N(int N, int lo, int hi) {
  if (N < lo || N > hi) {
    throw PreconditionError("N = " + std::to_string(N) + " outside " + std::to_string(lo) + ".." +
                            std::to_string(hi));
  }
}

void require_phi(int N, double phi) {
  if (!(phi >= 0.0) || phi > 1.0 / N + 1e-15) throw PreconditionError("phi must lie in [0, 1/N]");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// 1 - (1 - m phi)^p without cancellation for small phi.
double one_minus_pow(double m, double phi, double p) { return -std::expm1(p * std::log1p(-m * phi)); }

double numerator(int N, double phi) {
  const double m = N - 1;
  return one_minus_pow(m, phi, 3.0) - m * phi * phi * phi;
}

double ratio(const std::vector<double>& masses) {
  double cubes = 0.0, halves = 0.0;
  for (double m : masses) {
    cubes += m * m * m;
    halves += m * std::sqrt(m);
  }
  return (1.0 - cubes) / (1.0 - halves);
}

// Every composition of `units` into N nonnegative parts except the vertices.
template <class Fn>
void for_each_simplex_point(int N, int units, Fn&& fn) {
  std::vector<int> k(static_cast<std::size_t>(N), 0);
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == N - 1) {
      k[static_cast<std::size_t>(idx)] = left;
      fn(k);
      return;
    }
    for (int u = 0; u <= left; ++u) {
      k[static_cast<std::size_t>(idx)] = u;
      self(self, idx + 1, left - u);
    }
  };
  rec(rec, 0, units);
}

SimplexMinimum simplex_minimum(int N, double step) {
  const int units = static_cast<int>(std::round(1.0 / step));
  SimplexMinimum out;
  out.value = kInf;
  out.face_min = kInf;
  std::vector<double> masses(static_cast<std::size_t>(N));
  for_each_simplex_point(N, units, [&](const std::vector<int>& k) {
    int nonzero = 0;
    for (int u : k) nonzero += u > 0;
    if (nonzero < 2) return;
    std::vector<double> present;
    for (int u : k) {
      if (u > 0) present.push_back(static_cast<double>(u) / units);
    }
    const double v = ratio(present);
    ++out.evaluations;
    if (v < out.value) {
      out.value = v;
      out.argmin.assign(k.size(), 0.0);
      for (std::size_t i = 0; i < k.size(); ++i) out.argmin[i] = static_cast<double>(k[i]) / units;
    }
    if (nonzero < N) out.face_min = std::min(out.face_min, v);
  });
  std::sort(out.argmin.begin(), out.argmin.end());
  return out;
}

}  // namespace

double g_N(int N, double phi) {
  require_phi(N, phi);
  const double m = N - 1;
  return one_minus_pow(m, phi, 1.5) - m * phi * std::sqrt(phi);
}

double f_N(int N, double phi) {
  if (N < 2) throw PreconditionError("f_N needs N >= 2");
  require_phi(N, phi);
  if (phi == 0.0) return 2.0;
  return numerator(N, phi) / g_N(N, phi);
}

double f_prime_N(int N, double phi) {
  if (N < 2) throw PreconditionError("f_N needs N >= 2");
  if (phi == 0.0) throw PreconditionError("f_N' is singular at phi = 0");
  require_phi(N, phi);
  const double m = N - 1;
  const double psi = 1.0 - m * phi;
  return 3.0 * m / g_N(N, phi) *
         (psi * psi - phi * phi - 0.5 * (std::sqrt(psi) - std::sqrt(phi)) * f_N(N, phi));
}

double h_N(int N, double phi) {
  if (N < 2) throw PreconditionError("h_N needs N >= 2");
  if (phi == 0.0) throw PreconditionError("h_N is singular at phi = 0");
  require_phi(N, phi);
  const double psi = 1.0 - (N - 1) * phi;
  return -phi * phi + psi * psi + 0.5 * (std::sqrt(phi) - std::sqrt(psi)) * f_N(N, phi);
}

double alpha_threshold(int N) {
  const double d = 2.0 * std::sqrt(static_cast<double>(N)) + 1.0;
  return 6.0 / (kQ * d * d);
}

Alpha2Certificate alpha2_certificate(int samples) {
  const auto P = [](double X) { return 2 * X * X * X * X - 2 * X * X * X - X * X + X; };
  Alpha2Certificate c;
  const double roots[4] = {-1.0 / kSqrt2, 0.0, 1.0 / kSqrt2, 1.0};
  for (int i = 0; i < 4; ++i) {
    c.root_residual[i] = std::abs(P(roots[i]));
    if (c.root_residual[i] > 1e-12) {
      throw CertificateError("alpha_2: P(" + num(roots[i]) + ") = " + num(c.root_residual[i]));
    }
  }
  c.min_P_interior = kInf;
  c.min_f2 = kInf;
  for (int i = 1; i < samples; ++i) {
    const double X = (1.0 / kSqrt2) * i / samples;
    c.min_P_interior = std::min(c.min_P_interior, P(X));
    c.min_f2 = std::min(c.min_f2, f_N(2, 0.5 * i / samples));
  }
  c.min_f2 = std::min(c.min_f2, f_N(2, 0.5));
  if (!(c.min_P_interior > 0.0)) throw CertificateError("alpha_2: P not positive on (0, 1/sqrt 2)");
  if (c.min_f2 < 2.0 - 1e-9) throw CertificateError("alpha_2: two-mass ratio below 2: " + num(c.min_f2));
  c.value = 2.0;
  return c;
}

MonotoneRegion monotone_region_eta(int N, int samples) {
  require_N(N, 3, 6);
  const double m = N - 1;
  MonotoneRegion r;
  r.eta = kEta;
  r.square_condition = std::pow(8.0 / (1.0 + 16.0 * m), 2);
  r.linear_condition = 1.0 / (108.0 * m);
  if (r.eta > r.square_condition || r.eta > r.linear_condition) {
    throw CertificateError("eta = 1/540 violates a sufficient condition for N = " + std::to_string(N));
  }
  r.min_h = r.min_h_minus_chain = r.min_chain = kInf;
  double min_h_at = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double phi = r.eta * i / samples;
    const double h = h_N(N, phi);
    const double chain = std::sqrt(phi) / 36.0 - 3.0 * m * phi;
    if (h < r.min_h) {
      r.min_h = h;
      min_h_at = phi;
    }
    r.min_h_minus_chain = std::min(r.min_h_minus_chain, h - chain);
    r.min_chain = std::min(r.min_chain, chain);
  }
  // Very close to 0 h_N is itself O(phi^{1/2}); sample there too.
  for (int k = 4; k <= 12; ++k) {
    const double phi = std::pow(10.0, -k);
    const double h = h_N(N, phi);
    if (h < r.min_h) {
      r.min_h = h;
      min_h_at = phi;
    }
  }
  if (!(r.min_h > 0.0)) {
    throw CertificateError("h_N not positive on (0, eta]: " + num(r.min_h) + " at phi = " + num(min_h_at));
  }
  if (r.min_h_minus_chain < -1e-12) {
    throw CertificateError("h_N below its chained lower bound by " + num(-r.min_h_minus_chain));
  }

  // Intermediate inequalities on their stated domain phi <= square_condition.
  struct Worst {
    const char* name;
    double slack = kInf;  // min of (rhs - lhs), must be >= -tol
    double at = 0.0;
  };
  Worst w[7] = {{"estimh"}, {"boundabovefden"}, {"bounddenomaux"}, {"bounddenom"},
                {"boundf"}, {"h lower bound, rational form"}, {"h lower bound, linearized"}};
  const auto note = [](Worst& x, double slack, double phi) {
    if (slack < x.slack) {
      x.slack = slack;
      x.at = phi;
    }
  };
  for (int i = 1; i <= samples; ++i) {
    const double phi = r.square_condition * i / samples;
    const double sp = std::sqrt(phi);
    const double psi = 1.0 - m * phi;
    const double f = f_N(N, phi);
    const double h = h_N(N, phi);
    const double g = g_N(N, phi);
    note(w[0], h - (1.0 - 2.0 * m * phi + 0.5 * (sp - 1.0) * f), phi);
    note(w[1], 3.0 * m * phi + m * m * m * phi * phi * phi - numerator(N, phi), phi);
    note(w[2], 1.0 - 1.5 * m * phi + 0.25 * m * phi * sp - psi * std::sqrt(psi), phi);
    note(w[3], g - (1.5 * m * phi - 1.25 * m * phi * sp), phi);
    const double rational = (1.0 + m * m * phi * phi / 3.0) / (1.0 - 5.0 / 6.0 * sp);
    note(w[4], 2.0 * rational - f, phi);
    note(w[5], h - (1.0 - 2.0 * m * phi + (sp - 1.0) * rational), phi);
    note(w[6], h - (1.0 - 3.0 * m * phi + (sp - 1.0) * (1.0 + 35.0 / 36.0 * sp)), phi);
  }
  for (const Worst& x : w) {
    r.inequalities.push_back({x.name, x.slack >= -1e-12,
                              "min slack " + num(x.slack) + " at phi = " + num(x.at)});
  }
  return r;
}

LipschitzBound lipschitz_Lambda(int N) {
  require_N(N, 3, 6);
  LipschitzBound b;
  b.g_at_eta = g_N(N, kEta);
  b.g_at_inv_N = g_N(N, 1.0 / N);
  b.g_min = std::min(b.g_at_eta, b.g_at_inv_N);
  // g_N' has the sign of (1-(N-1)phi)^{1/2} - phi^{1/2}, so interior values
  // never undercut the endpoints; confirm on a sample anyway.
  for (int i = 0; i <= 10000; ++i) {
    const double phi = kEta + (1.0 / N - kEta) * i / 10000.0;
    if (g_N(N, std::min(phi, 1.0 / N)) < b.g_min - 1e-15) {
      throw CertificateError("g_N dips below its endpoint minimum at phi = " + num(phi));
    }
  }
  b.paper_floor_holds = b.g_min >= 1.3e-2;
  const double m = N - 1;
  b.derived_bound = 3.0 * m / b.g_min * (1.0 + 0.5 / b.g_min);
  if (b.derived_bound > kLambda) {
    throw CertificateError("|f_N'| bound " + num(b.derived_bound) + " exceeds Lambda = 1.2e5");
  }
  b.Lambda = kLambda;
  return b;
}

CertifiedBound certify_alpha_lower(int N, double delta, unsigned workers) {
  require_N(N, 3, 6);
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  const double right = 1.0 / N;
  const long long steps = static_cast<long long>(std::floor((right - kEta) / delta));
  const bool add_right = kEta + static_cast<double>(steps) * delta < right;
  const long long count = steps + 1 + (add_right ? 1 : 0);
  const auto point = [&](long long j) { return j > steps ? right : kEta + static_cast<double>(j) * delta; };

  if (workers == 0) workers = 1;
  const std::size_t chunks = std::min<std::size_t>(workers, static_cast<std::size_t>(count));
  std::vector<double> best(chunks, kInf), arg(chunks, 0.0);
  const long long per = (count + static_cast<long long>(chunks) - 1) / static_cast<long long>(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const long long lo = static_cast<long long>(c) * per;
    const long long hi = std::min(count, lo + per);
    for (long long j = lo; j < hi; ++j) {
      const double phi = point(j);
      const double v = f_N(N, phi);
      if (v < best[c]) {
        best[c] = v;
        arg[c] = phi;
      }
    }
  });
  CertifiedBound r;
  r.N = N;
  r.delta = delta;
  r.evaluations = count;
  r.grid_min = kInf;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (best[c] < r.grid_min) {
      r.grid_min = best[c];
      r.grid_argmin = arg[c];
    }
  }
  r.alpha_estimate = std::min(2.0, r.grid_min);
  r.slack = kLambda * delta / 2.0;
  r.certified_lower = r.alpha_estimate - r.slack;
  r.threshold = alpha_threshold(N);
  r.margin = r.certified_lower - r.threshold;
  r.verdict = r.certified_lower > r.threshold;
  return r;
}

SimplexMinimum simplex_bruteforce_alpha(int N, double step) {
  require_N(N, 3, 4);
  if (step < 1e-2 - 1e-15 || step > 0.5) throw PreconditionError("step must lie in [1e-2, 0.5]");
  if (std::abs(std::round(1.0 / step) * step - 1.0) > 1e-9) throw PreconditionError("1/step must be an integer");
  return simplex_minimum(N, step);
}

TwoValueReport two_value_reduction_check(int N, double step) {
  require_N(N, 3, 6);
  TwoValueReport r;
  r.alpha = certify_alpha_lower(N, 1e-5).grid_min;
  r.critical_point = std::cbrt(r.alpha / 8.0);
  const auto dP = [&](double X) { return 4.0 * X * X * X - 0.5 * r.alpha; };
  double prev = dP(0.0);
  for (int i = 1; i <= 20000; ++i) {
    const double cur = dP(2.0 * i / 20000.0);
    if ((prev < 0.0) != (cur < 0.0)) ++r.positive_roots;
    prev = cur;
  }
  r.checks.push_back({"P' has one positive root", r.positive_roots == 1,
                      "roots counted " + std::to_string(r.positive_roots) + ", root (alpha/8)^(1/3) = " +
                          num(r.critical_point) + ", residual " + num(std::abs(dP(r.critical_point)))});
  // N >= 5 is enumerated at the coarser of step and 2e-2 to stay affordable.
  const double s = N <= 4 ? step : std::max(step, 2e-2);
  const SimplexMinimum sm = simplex_minimum(N, s);
  r.argmin = sm.argmin;
  r.distinct_values = r.argmin.empty() ? 0 : 1;
  for (std::size_t i = 1; i < r.argmin.size(); ++i) {
    if (r.argmin[i] - r.argmin[i - 1] > 1e-6) ++r.distinct_values;
  }
  std::string where;
  for (double v : r.argmin) where += (where.empty() ? "" : ",") + num(v);
  r.checks.push_back({"brute-force argmin takes at most two values", r.distinct_values <= 2,
                      "argmin (" + where + ") at step " + num(s) + " has " +
                          std::to_string(r.distinct_values) + " distinct values"});
  return r;
}

double neq2_L(double a, double phi) { return 1.0 + 9.0 / (2.0 * a * a * kQ) * phi * (1.0 - phi); }

double neq2_R(double a, double phi) {
  return 3.0 / (a * kQ) * (1.0 - phi * std::sqrt(phi) - (1.0 - phi) * std::sqrt(1.0 - phi));
}

double neq2_D(double a, double phi) {
  return 1.0 - 2.0 * phi - a * (std::sqrt(1.0 - phi) - std::sqrt(phi));
}

double quartic_definition(double a, double X) {
  const double u = 1.0 - 2.0 * X * X + a * X;
  return u * u - a * a * (1.0 - X * X);
}

double quartic_expanded(double a, double X) {
  return 4 * X * X * X * X - 4 * a * X * X * X + 2 * (a * a - 2) * X * X + 2 * a * X + (1 - a * a);
}

double quartic_factored(double a, double X) {
  return 2.0 * (X * X - 0.5) * (2.0 * X * X - 2.0 * a * X + (a * a - 1.0));
}

double root_X_minus(double a) {
  if (a > kSqrt2 + 1e-12) throw PreconditionError("X_- is real only for a <= sqrt 2");
  return 0.5 * (a - std::sqrt(std::max(0.0, 2.0 - a * a)));
}

double root_X_plus(double a) {
  if (a > kSqrt2 + 1e-12) throw PreconditionError("X_+ is real only for a <= sqrt 2");
  return 0.5 * (a + std::sqrt(std::max(0.0, 2.0 - a * a)));
}

double neq2_Psi(double a) {
  const double x = root_X_minus(a);
  return neq2_L(a, x * x) - neq2_R(a, x * x);
}

double a_of_T(double T) { return 3.0 * kSqrt2 * T / (kSqrt2 - 1.0); }

double a_max() { return a_of_T(0.25); }

std::vector<CheckResult> neq2_suite(const Neq2Options& o) {
  std::vector<CheckResult> out;
  const TStarWindow w = t_star_window();
  const double a_lo = w.a_minus;
  const double a_hi = a_max();
  const double x_hi = 1.0 / kSqrt2;

  {  // (a) factorization and the roots +-1/sqrt 2
    double worst = 0.0, at_a = 0.0, at_x = 0.0, worst_root = 0.0;
    const int n = o.factor_grid;
    for (int i = 0; i <= n; ++i) {
      const double a = a_lo + (a_hi - a_lo) * i / n;
      worst_root = std::max({worst_root, std::abs(quartic_expanded(a, x_hi)), std::abs(quartic_expanded(a, -x_hi)),
                             std::abs(quartic_definition(a, x_hi))});
      for (int j = 0; j <= n; ++j) {
        const double X = x_hi * j / n;
        const double e = std::max(std::abs(quartic_definition(a, X) - quartic_expanded(a, X)),
                                  std::abs(quartic_expanded(a, X) - quartic_factored(a, X)));
        if (e > worst) {
          worst = e;
          at_a = a;
          at_x = X;
        }
      }
    }
    out.push_back({"quartic factorization", worst <= 1e-12,
                   "max residual " + num(worst) + " at a = " + num(at_a) + ", X = " + num(at_x)});
    out.push_back({"quartic roots +-1/sqrt2", worst_root <= 1e-12, "max |P_a(+-1/sqrt2)| " + num(worst_root)});
  }

  {  // (b), (c) extra roots on [a_-, sqrt 2]
    double worst = 0.0, worst_sq = 0.0;
    bool ordered = true;
    for (int i = 0; i <= o.psi_points; ++i) {
      const double a = a_lo + (kSqrt2 - a_lo) * i / o.psi_points;
      const double xm = root_X_minus(a), xp = root_X_plus(a);
      worst = std::max({worst, std::abs(quartic_expanded(a, xm)), std::abs(quartic_expanded(a, xp))});
      worst_sq = std::max(worst_sq, std::abs(xm * xm - 0.5 * (1.0 - a * std::sqrt(std::max(0.0, 2.0 - a * a)))));
      ordered = ordered && xm >= -1e-15 && xm <= x_hi + 1e-12 && xp >= x_hi - 1e-12;
    }
    out.push_back({"extra roots X_+-", worst <= 1e-12 && ordered,
                   "max |P_a(X_+-)| " + num(worst) + (ordered ? ", 0 <= X_- <= 1/sqrt2 <= X_+" : ", ordering fails")});
    const double s = a_lo * std::sqrt(2.0 - a_lo * a_lo);
    out.push_back({"X_-^2 = (1 - a sqrt(2 - a^2))/2", worst_sq <= 1e-12,
                   "max deviation " + num(worst_sq) + "; the variant with 2a sqrt(2 - a^2) gives " +
                       num(0.5 * (1.0 - 2.0 * s)) + " at a_-, which is negative"});
  }

  {  // (d) the scalar constant and the inequality it is meant to secure
    const double s = a_lo * std::sqrt(2.0 - a_lo * a_lo);
    const double literal_base = 1.0 - 2.0 * s;
    const double value = (std::pow(1.0 - s, 1.5) + 1.0) / (2.0 * kSqrt2) + 3.0 / (4.0 * kSqrt2) * (1.0 - s * s);
    out.push_back({"constant near 1.02", value >= 1.015 && value <= 1.025,
                   "value " + num(value) + " (expected in [1.015, 1.025]); with 2a sqrt(2 - a^2) the base " +
                       num(literal_base) + " is negative"});
    double min_G = kInf, at = 0.0;
    for (int i = 0; i <= o.psi_points; ++i) {
      const double a = a_lo + (kSqrt2 - a_lo) * i / o.psi_points;
      const double x = root_X_minus(a);
      const double x2 = x * x;
      const double G = x2 * x + std::pow(1.0 - x2, 1.5) + 3.0 / a * x2 * (1.0 - x2);
      if (G < min_G) {
        min_G = G;
        at = a;
      }
    }
    out.push_back({"Psi' <= 0 criterion G(a) >= 1", min_G >= 1.0,
                   "min G " + num(min_G) + " at a = " + num(at)});
  }

  {  // (e) Psi nonincreasing, Psi(sqrt 2) > 0, Psi is the minimum over phi
    double worst_rise = -kInf, at = 0.0;
    double prev = neq2_Psi(a_lo);
    for (int i = 1; i <= o.psi_points; ++i) {
      const double a = a_lo + (kSqrt2 - a_lo) * i / o.psi_points;
      const double cur = neq2_Psi(a);
      if (cur - prev > worst_rise) {
        worst_rise = cur - prev;
        at = a;
      }
      prev = cur;
    }
    const double end = neq2_Psi(kSqrt2);
    bool wide = true;  // observation on [1, sqrt 2], not part of the verdict
    double p = neq2_Psi(1.0);
    for (int i = 1; i <= o.psi_points; ++i) {
      const double c = neq2_Psi(1.0 + (kSqrt2 - 1.0) * i / o.psi_points);
      wide = wide && c <= p + 1e-13;
      p = c;
    }
    out.push_back({"Psi nonincreasing on [a_-, sqrt2]", worst_rise <= 1e-13 && end > 0.0,
                   "largest step change " + num(worst_rise) + " at a = " + num(at) + ", Psi(sqrt2) = " + num(end) +
                       (wide ? "; also nonincreasing on [1, sqrt2] (observation)"
                             : "; not monotone on [1, sqrt2] (observation)")});
    double gap = kInf;
    for (int i = 0; i <= 20; ++i) {
      const double a = a_lo + (kSqrt2 - a_lo) * i / 20;
      double sampled = kInf;
      for (int j = 0; j <= 20000; ++j) {
        const double phi = 0.5 * j / 20000;
        sampled = std::min(sampled, neq2_L(a, phi) - neq2_R(a, phi));
      }
      gap = std::min(gap, sampled - neq2_Psi(a));
    }
    out.push_back({"Psi equals min over phi", gap >= -1e-12, "min(sampled min - Psi) " + num(gap)});
  }

  {  // D has the sign of d/dphi (L - R) and of P_a(sqrt phi)
    int mismatches = 0;
    for (int i = 0; i <= 100; ++i) {
      const double a = a_lo + (a_hi - a_lo) * i / 100;
      for (int j = 1; j < 500; ++j) {
        const double phi = 0.5 * j / 500;
        const double D = neq2_D(a, phi);
        const double exact = 9.0 / (2.0 * a * a * kQ) * D;
        const double h = 1e-6;
        const double fd = ((neq2_L(a, phi + h) - neq2_R(a, phi + h)) - (neq2_L(a, phi - h) - neq2_R(a, phi - h))) /
                          (2.0 * h);
        const double P = quartic_expanded(a, std::sqrt(phi));
        if (std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact))) ++mismatches;
        if (std::abs(D) > 1e-9 && std::abs(P) > 1e-9 && ((D > 0) != (P > 0))) ++mismatches;
      }
    }
    out.push_back({"sign of D", mismatches == 0, std::to_string(mismatches) + " mismatches"});
  }

  {  // (f) global grid over [T_-, 1/4] x [0, 1/2]
    const int nT = o.global_T, nP = o.global_phi;
    const double dT = (0.25 - w.T_minus) / (nT - 1);
    const double dP = 0.5 / (nP - 1);
    double min_gap = kInf, at_T = 0.0, at_phi = 0.0;
    long long near_equal = 0, stray = 0;
    for (int i = 0; i < nT; ++i) {
      const double T = i + 1 == nT ? 0.25 : w.T_minus + dT * i;
      const double a = a_of_T(T);
      for (int j = 0; j < nP; ++j) {
        const double phi = j + 1 == nP ? 0.5 : dP * j;
        const double g = neq2_L(a, phi) - neq2_R(a, phi);
        if (g < min_gap) {
          min_gap = g;
          at_T = T;
          at_phi = phi;
        }
        if (g <= 1e-9) {
          ++near_equal;
          if (std::abs(T - 0.25) > dT * (1 + 1e-9) || std::abs(phi - 0.5) > dP * (1 + 1e-9)) ++stray;
        }
      }
    }
    out.push_back({"L >= R on the global grid", min_gap >= -1e-12 && stray == 0,
                   "min L - R " + num(min_gap) + " at T = " + num(at_T) + ", phi = " + num(at_phi) + "; " +
                       std::to_string(near_equal) + " points with L - R <= 1e-9, " + std::to_string(stray) +
                       " of them away from (1/4, 1/2)"});
  }
  return out;
}

}  // namespace branched
