#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace branched {

enum class Command { Tree, Alpha, Verify, Energy };
enum class Format { Json, Csv, Svg, Md, Text };

struct RunConfig {
  Command command = Command::Verify;
  double T = 0.25;
  double phi = 1.0;
  double X = 0.0;
  int depth = 10;
  std::optional<int> N;
  bool all = false;
  double delta = 1e-6;
  double grid_step = 0.01;
  double mass_step = 0.01;
  double t_min = 0.05;
  double t_max = 2.0;
  int n_max = 6;
  std::optional<Format> format;
  std::string out;   // primary output path; stdout when empty
  std::string svg;   // extra SVG path (tree)
  std::string json;  // extra JSON path (tree)
  bool full = false;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Exit codes: 0 all requested checks pass, 1 a check or verdict failed,
/// 2 invalid parameters.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

Format parse_format(const std::string& name);

/// Rejects parameter combinations before any work is done. Throws
/// PreconditionError or RegimeError naming the failing inequality.
void validate_config(const RunConfig& config);

int cmd_tree(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_alpha(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_energy(const RunConfig& config, std::ostream& out, std::ostream& err);

/// validate_config followed by the command; errors become exit code 2.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace branched
