#include "branched/tree_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "branched/errors.hpp"

namespace branched {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string tree_to_json(const TransportTree& tree, const std::optional<EnergyBreakdown>& energy) {
  std::ostringstream out;
  const Horizon h = tree.horizon();
  out << "{\"horizon\":[" << format_number(h.begin) << ',' << format_number(h.end) << "],";
  if (energy) {
    out << "\"energy\":{\"length\":" << format_number(energy->length_term)
        << ",\"kinetic\":" << format_number(energy->kinetic_term)
        << ",\"total\":" << format_number(energy->total) << "},";
  }
  out << "\"branches\":[";
  bool first = true;
  for (const Branch& b : tree.branches()) {
    if (!first) out << ",\n";
    first = false;
    out << "{\"mass\":" << format_number(b.mass) << ",\"t0\":" << format_number(b.t0)
        << ",\"t1\":" << format_number(b.t1) << ",\"x0\":" << format_number(b.x0)
        << ",\"x1\":" << format_number(b.x1) << '}';
  }
  out << "]}\n";
  return out.str();
}

TransportTree tree_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    const auto& hz = doc.at("horizon");
    if (!hz.is_array() || hz.size() != 2) throw PreconditionError("horizon must be [a, b]");
    std::vector<Branch> branches;
    for (const auto& b : doc.at("branches")) {
      branches.push_back({b.at("mass").get<double>(), b.at("t0").get<double>(), b.at("t1").get<double>(),
                          b.at("x0").get<double>(), b.at("x1").get<double>()});
    }
    return TransportTree(std::move(branches), {hz[0].get<double>(), hz[1].get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed tree json: ") + e.what());
  }
}

std::string tree_to_svg(const TransportTree& tree) {
  const Horizon h = tree.horizon();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.55 " << format_number(h.begin)
      << " 1.1 " << format_number(h.length()) << "\" preserveAspectRatio=\"none\" width=\"600\" height=\""
      << static_cast<int>(std::ceil(600.0 * h.length() / 1.1)) << "\">\n";
  out << "<g stroke=\"black\" stroke-linecap=\"round\">\n";
  constexpr double kStrokeScale = 0.006;
  for (const Branch& b : tree.branches()) {
    out << "<line x1=\"" << format_number(b.x0) << "\" y1=\"" << format_number(b.t0) << "\" x2=\""
        << format_number(b.x1) << "\" y2=\"" << format_number(b.t1) << "\" stroke-width=\""
        << format_number(kStrokeScale * std::sqrt(b.mass)) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace branched
