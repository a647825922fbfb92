#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "branched/cli.hpp"
#include "branched/errors.hpp"

using branched::Command;
using branched::RunConfig;

namespace {

void add_common(CLI::App* app, RunConfig& c, std::string& format) {
  app->add_option("--format", format, "Output format: json, csv, svg, md or text");
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--seed", c.seed, "Seed for randomized samples");
  app->add_option("--workers", c.workers, "Worker threads for grid sweeps")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar branched transport: trees, certified alpha_N bounds, energy curves"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format;

  auto* tree = app.add_subcommand("tree", "Build the optimal tree for (T, phi, X) truncated at --depth");
  tree->add_option("--T", c.T, "Horizon");
  tree->add_option("--phi", c.phi, "Mass");
  tree->add_option("--X", c.X, "Offset of the source");
  tree->add_option("--depth", c.depth, "Truncation depth");
  tree->add_option("--svg", c.svg, "Also write an SVG figure here");
  tree->add_option("--json", c.json, "Also write the JSON tree here");
  add_common(tree, c, format);

  auto* alpha = app.add_subcommand("alpha", "Certified lower bounds on alpha_N for N = 3..6");
  alpha->add_option("--N", c.N, "Number of branches");
  alpha->add_flag("--all", c.all, "Certify N = 3, 4, 5, 6");
  alpha->add_option("--delta", c.delta, "Grid step on [1/540, 1/N]");
  add_common(alpha, c, format);

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  verify->add_flag("--full", c.full, "Include the energy sandwich sweep and the full N = 2 grid");
  verify->add_flag_callback("--quick", [&c] { c.full = false; }, "Quick suite (default)");
  add_common(verify, c, format);

  auto* energy = app.add_subcommand("energy", "Solve the recursive characterization of E(T) on a grid");
  energy->add_option("--T-max,--T", c.t_max, "Largest horizon");
  energy->add_option("--t-min", c.t_min, "Smallest horizon");
  energy->add_option("--grid-step", c.grid_step, "Horizon step above 1/4");
  energy->add_option("--mass-step", c.mass_step, "Mass grid step for partitions");
  energy->add_option("--N,--n-max", c.n_max, "Largest number of branches at a branching point");
  add_common(energy, c, format);

  CLI11_PARSE(app, argc, argv);

  if (*tree) c.command = Command::Tree;
  if (*alpha) c.command = Command::Alpha;
  if (*verify) c.command = Command::Verify;
  if (*energy) c.command = Command::Energy;
  try {
    if (!format.empty()) c.format = branched::parse_format(format);
  } catch (const branched::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return branched::kExitUsage;
  }
  return branched::dispatch(c, std::cout, std::cerr);
}
