#pragma once

#include <span>
#include <vector>

namespace branched {

/// An ordered split of `units` into positive parts, with its cost.
struct Composition {
  std::vector<int> parts;  // nondecreasing
  double value = 0.0;
};

/// For every N in 1..max_parts, the composition of `units` into exactly N
/// positive parts minimizing sum_i cost[u_i] (cost indexed by part size,
/// cost[0] unused). Dynamic program over (parts, remaining units) in
/// O(max_parts * units^2). Entry N-1 is empty with value +inf when N > units.
/// Parts are returned sorted nondecreasingly.
std::vector<Composition> min_compositions(int units, int max_parts, std::span<const double> cost);

}  // namespace branched
