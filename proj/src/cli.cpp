#include "branched/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "branched/certify.hpp"
#include "branched/errors.hpp"
#include "branched/recursion.hpp"
#include "branched/selfsimilar.hpp"
#include "branched/tree.hpp"
#include "branched/tree_io.hpp"
#include "branched/verify.hpp"

namespace branched {

namespace {

void write_to(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path + " for writing");
  f << content;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "svg") return Format::Svg;
  if (name == "md") return Format::Md;
  if (name == "text") return Format::Text;
  throw PreconditionError("unknown format '" + name + "' (json, csv, svg, md, text)");
}

void validate_config(const RunConfig& c) {
  if (c.workers == 0) throw PreconditionError("--workers must be at least 1");
  switch (c.command) {
    case Command::Tree: {
      if (!(c.T > 0.0)) throw PreconditionError("--T must be positive");
      if (!(c.phi > 0.0)) throw PreconditionError("--phi must be positive");
      const double effective = c.T / (c.phi * std::sqrt(c.phi));
      if (effective < 0.25) {
        throw RegimeError("T * phi^(-3/2) = " + format_number(effective) + " < 1/4");
      }
      if (c.depth < 1 || c.depth > kMaxMaterializedDepth) {
        throw PreconditionError("--depth must lie in 1.." + std::to_string(kMaxMaterializedDepth));
      }
      if (c.format && *c.format != Format::Json && *c.format != Format::Svg) {
        throw PreconditionError("tree writes json or svg");
      }
      break;
    }
    case Command::Alpha:
      if (!c.all && !c.N) throw PreconditionError("alpha needs --N or --all");
      if (c.N && (*c.N < 3 || *c.N > 6)) throw PreconditionError("--N must lie in 3..6");
      if (!(c.delta > 0.0)) throw PreconditionError("--delta must be positive");
      if (c.format && *c.format != Format::Csv && *c.format != Format::Md) {
        throw PreconditionError("alpha writes csv or md");
      }
      break;
    case Command::Energy: {
      if (!(c.t_min > 0.0) || !(c.t_max > c.t_min)) throw PreconditionError("need 0 < --t-min < --T-max");
      if (!(c.grid_step > 0.0)) throw PreconditionError("--grid-step must be positive");
      const double n = std::round(1.0 / c.mass_step);
      if (!(c.mass_step > 0.0) || std::abs(n * c.mass_step - 1.0) > 1e-9) {
        throw PreconditionError("--mass-step must be 1/k for an integer k");
      }
      if (c.n_max < 2) throw PreconditionError("--n-max must be at least 2");
      if (c.format && *c.format != Format::Csv) throw PreconditionError("energy writes csv");
      break;
    }
    case Command::Verify:
      if (c.format && *c.format != Format::Text && *c.format != Format::Json) {
        throw PreconditionError("verify writes text or json");
      }
      break;
  }
}

int cmd_tree(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const TransportTree tree = optimal_tree(c.T, c.phi, c.X, c.depth);
  const EnergyBreakdown e = energy(tree);
  const TruncatedEnergy analytic = optimal_tree_energy(c.T, c.phi, c.X, c.depth);
  const std::string json = tree_to_json(tree, e);
  if (!c.svg.empty()) write_to(c.svg, tree_to_svg(tree), out);
  if (!c.json.empty()) write_to(c.json, json, out);
  const Format f = c.format.value_or(Format::Json);
  if (!c.out.empty() || (c.svg.empty() && c.json.empty())) {
    write_to(c.out, f == Format::Svg ? tree_to_svg(tree) : json, out);
  }
  err << "branches " << tree.size() << ", energy " << format_number(e.total) << ", limit "
      << format_number(analytic.limit) << ", tail bound " << format_number(analytic.tail) << '\n';
  return kExitOk;
}

int cmd_alpha(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<CertifiedBound> rows;
  std::vector<int> Ns;
  if (c.all) {
    Ns = {3, 4, 5, 6};
  } else {
    Ns = {*c.N};
  }
  for (int N : Ns) rows.push_back(certify_alpha_lower(N, c.delta, c.workers));
  std::ostringstream s;
  if (c.format.value_or(Format::Csv) == Format::Md) {
    s << "| N | alpha_N (min(2, grid min)) | grid min | argmin | slack | certified lower | critical value | verdict |\n";
    s << "|---|---|---|---|---|---|---|---|\n";
    for (const CertifiedBound& r : rows) {
      char line[400];
      std::snprintf(line, sizeof line, "| %d | %.2f | %.6f | %.8f | %.6g | %.6f | %.4f | %s |\n", r.N,
                    r.alpha_estimate, r.grid_min, r.grid_argmin, r.slack, r.certified_lower, r.threshold,
                    yes_no(r.verdict));
      s << line;
    }
  } else {
    s << "N,grid_min,argmin,slack,certified_lower,threshold,verdict\n";
    for (const CertifiedBound& r : rows) {
      s << r.N << ',' << format_number(r.grid_min) << ',' << format_number(r.grid_argmin) << ','
        << format_number(r.slack) << ',' << format_number(r.certified_lower) << ',' << format_number(r.threshold)
        << ',' << yes_no(r.verdict) << '\n';
    }
  }
  write_to(c.out, s.str(), out);
  bool ok = true;
  for (const CertifiedBound& r : rows) {
    if (!r.verdict) {
      err << "certification failed for N = " << r.N << ": certified lower bound "
          << format_number(r.certified_lower) << " <= critical value " << format_number(r.threshold) << '\n';
      ok = false;
    }
  }
  if (c.delta > kPaperDelta) err << "note: delta above 1e-6, slack " << format_number(kLambda * c.delta / 2) << '\n';
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  VerifyOptions o;
  o.full = c.full;
  o.seed = c.seed;
  o.workers = c.workers;
  const std::vector<CheckResult> checks = run_verify(o);
  std::size_t passed = 0;
  for (const CheckResult& r : checks) passed += r.pass;
  std::ostringstream s;
  if (c.format.value_or(Format::Text) == Format::Json) {
    nlohmann::ordered_json doc;
    doc["suite"] = c.full ? "full" : "quick";
    doc["passed"] = passed;
    doc["failed"] = checks.size() - passed;
    doc["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& r : checks) {
      doc["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    s << doc.dump(2) << '\n';
  } else {
    for (const CheckResult& r : checks) s << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    s << "verify: " << passed << '/' << checks.size() << " passed\n";
  }
  write_to(c.out, s.str(), out);
  return passed == checks.size() ? kExitOk : kExitFailed;
}

int cmd_energy(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SolveOptions o;
  o.T_min = c.t_min;
  o.T_max = c.t_max;
  o.T_step = c.grid_step;
  o.mass_step = c.mass_step;
  o.N_max = c.n_max;
  o.workers = c.workers;
  const EnergyCurve curve = solve_E(o);
  std::ostringstream s;
  s << "T,E,lower,upper,exploratory\n";
  bool ok = true;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    s << format_number(curve.grid[i]) << ',' << format_number(curve.values[i]) << ','
      << format_number(curve.lower[i]) << ',' << format_number(curve.upper[i]) << ','
      << (curve.exploratory[i] ? 1 : 0) << '\n';
    ok = ok && curve.lower[i] <= curve.values[i] && curve.values[i] <= curve.upper[i] + 1e-12;
  }
  write_to(c.out, s.str(), out);
  err << "iterations " << curve.iterations << ", last change " << format_number(curve.last_change)
      << ", interpolation error estimate " << format_number(curve.interpolation_error)
      << "; rows with T < 1/4 are exploratory\n";
  return ok ? kExitOk : kExitFailed;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate_config(c);
    switch (c.command) {
      case Command::Tree:
        return cmd_tree(c, out, err);
      case Command::Alpha:
        return cmd_alpha(c, out, err);
      case Command::Verify:
        return cmd_verify(c, out, err);
      case Command::Energy:
        return cmd_energy(c, out, err);
    }
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CertificateError& e) {
    err << "certificate error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace branched
