#pragma once

#include <optional>
#include <string>

#include "branched/tree.hpp"

namespace branched {

/// Formats a double with 17 significant digits ("%.17g").
std::string format_number(double v);

/// Serializes {"horizon":[a,b],"branches":[...]} and, when given, an
/// "energy" object with length, kinetic and total.
std::string tree_to_json(const TransportTree& tree,
                         const std::optional<EnergyBreakdown>& energy = std::nullopt);

/// Parses the schema written by tree_to_json. Throws PreconditionError on
/// malformed input.
TransportTree tree_from_json(const std::string& text);

/// Space horizontal, time downward; one <line> per branch, stroke width
/// proportional to sqrt(mass).
std::string tree_to_svg(const TransportTree& tree);

}  // namespace branched
