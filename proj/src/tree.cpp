#include "branched/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "branched/errors.hpp"

namespace branched {

namespace {

constexpr double kNodeTolerance = 1e-12;

bool same_time(double a, double b) { return std::abs(a - b) <= kNodeTolerance; }

bool same_position(double a, double b) {
  return std::abs(a - b) <= kNodeTolerance * std::max(1.0, std::abs(a));
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Endpoint of a branch; `start` tells whether mass leaves (t0) or arrives (t1).
struct Endpoint {
  double t;
  double x;
  std::size_t branch;
  bool start;
};

// Groups endpoints into space-time nodes. Returns node id per endpoint index
// (2*b for the start of branch b, 2*b+1 for its end) and the node count.
std::pair<std::vector<std::size_t>, std::size_t> cluster_nodes(std::span<const Branch> bs) {
  std::vector<Endpoint> eps;
  eps.reserve(2 * bs.size());
  for (std::size_t b = 0; b < bs.size(); ++b) {
    eps.push_back({bs[b].t0, bs[b].x0, b, true});
    eps.push_back({bs[b].t1, bs[b].x1, b, false});
  }
  std::sort(eps.begin(), eps.end(), [](const Endpoint& l, const Endpoint& r) {
    if (l.t != r.t) return l.t < r.t;
    return l.x < r.x;
  });
  std::vector<std::size_t> node_of(eps.size());
  std::size_t nodes = 0;
  // Within a time cluster, sort by position and cut wherever positions differ.
  std::size_t i = 0;
  while (i < eps.size()) {
    std::size_t j = i + 1;
    while (j < eps.size() && same_time(eps[j].t, eps[j - 1].t)) ++j;
    std::sort(eps.begin() + static_cast<std::ptrdiff_t>(i), eps.begin() + static_cast<std::ptrdiff_t>(j),
              [](const Endpoint& l, const Endpoint& r) { return l.x < r.x; });
    for (std::size_t k = i; k < j; ++k) {
      if (k == i || !same_position(eps[k - 1].x, eps[k].x)) ++nodes;
      node_of[2 * eps[k].branch + (eps[k].start ? 0 : 1)] = nodes - 1;
    }
    i = j;
  }
  return {std::move(node_of), nodes};
}

std::vector<double> distinct_times(std::span<const Branch> bs) {
  std::vector<double> ts;
  ts.reserve(2 * bs.size());
  for (const Branch& b : bs) {
    ts.push_back(b.t0);
    ts.push_back(b.t1);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (out.empty() || !same_time(out.back(), t)) out.push_back(t);
  }
  return out;
}

std::size_t time_index(const std::vector<double>& times, double t) {
  auto it = std::lower_bound(times.begin(), times.end(), t - kNodeTolerance);
  return static_cast<std::size_t>(it - times.begin());
}

// Leaf-position interval reachable forward from each branch, and whether the
// forward subtree passes through a node with several inflows.
struct Descendants {
  std::vector<double> lo, hi;
  std::vector<bool> merges;
};

Descendants forward_descendants(std::span<const Branch> bs,
                                const std::vector<std::size_t>& node_of, std::size_t nodes) {
  std::vector<std::vector<std::size_t>> out_of(nodes);
  std::vector<std::size_t> inflow_count(nodes, 0);
  for (std::size_t b = 0; b < bs.size(); ++b) {
    out_of[node_of[2 * b]].push_back(b);
    ++inflow_count[node_of[2 * b + 1]];
  }
  std::vector<std::size_t> order(bs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return bs[l].t0 > bs[r].t0; });
  Descendants d;
  d.lo.assign(bs.size(), 0.0);
  d.hi.assign(bs.size(), 0.0);
  d.merges.assign(bs.size(), false);
  for (std::size_t b : order) {
    const std::size_t end = node_of[2 * b + 1];
    const auto& kids = out_of[end];
    if (kids.empty()) {
      d.lo[b] = d.hi[b] = bs[b].x1;
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    bool merges = inflow_count[end] > 1;
    for (std::size_t c : kids) {
      lo = std::min(lo, d.lo[c]);
      hi = std::max(hi, d.hi[c]);
      merges = merges || d.merges[c];
    }
    d.lo[b] = lo;
    d.hi[b] = hi;
    d.merges[b] = merges;
  }
  return d;
}

void check_conservation(std::span<const Branch> bs, Horizon h,
                        const std::vector<std::size_t>& node_of, std::size_t nodes,
                        ValidationReport& report) {
  std::vector<double> inflow(nodes, 0.0), outflow(nodes, 0.0), t(nodes, 0.0), x(nodes, 0.0);
  for (std::size_t b = 0; b < bs.size(); ++b) {
    const std::size_t s = node_of[2 * b], e = node_of[2 * b + 1];
    outflow[s] += bs[b].mass;
    inflow[e] += bs[b].mass;
    t[s] = bs[b].t0;
    x[s] = bs[b].x0;
    t[e] = bs[b].t1;
    x[e] = bs[b].x1;
  }
  for (std::size_t n = 0; n < nodes; ++n) {
    if (same_time(t[n], h.begin) || same_time(t[n], h.end)) continue;
    const double gap = std::abs(inflow[n] - outflow[n]);
    if (gap > kNodeTolerance * std::max(1.0, std::max(inflow[n], outflow[n]))) {
      report.violations.push_back({ViolationKind::Conservation, t[n], x[n], gap,
                                   fmt("inflow %.17g vs outflow %.17g", inflow[n], outflow[n])});
    }
  }
}

// Slab-by-slab sweep between consecutive node times. Inside a slab every alive
// branch is a straight segment spanning the whole slab, so two of them meet in
// its interior iff their order at the slab ends differs from the order at the
// slab midpoint.
void check_slabs(std::span<const Branch> bs, ValidationReport& report, bool mirrored) {
  const std::vector<double> times = distinct_times(bs);
  if (times.size() < 2) return;
  auto [node_of, nodes] = cluster_nodes(bs);
  const Descendants desc = forward_descendants(bs, node_of, nodes);

  std::vector<std::vector<std::size_t>> alive(times.size() - 1);
  for (std::size_t b = 0; b < bs.size(); ++b) {
    const std::size_t i0 = time_index(times, bs[b].t0);
    const std::size_t i1 = time_index(times, bs[b].t1);
    for (std::size_t j = i0; j < i1 && j < alive.size(); ++j) alive[j].push_back(b);
  }

  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    auto& ids = alive[j];
    if (ids.size() < 2) continue;
    const double left = times[j], right = times[j + 1];
    const double mid = 0.5 * (left + right);
    std::sort(ids.begin(), ids.end(), [&](std::size_t l, std::size_t r) {
      return bs[l].position_at(mid) < bs[r].position_at(mid);
    });
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      const Branch& p = bs[ids[k]];
      const Branch& q = bs[ids[k + 1]];
      if (!mirrored) {
        const double pm = p.position_at(mid), qm = q.position_at(mid);
        const double pl = p.position_at(left), ql = q.position_at(left);
        const double pr = p.position_at(right), qr = q.position_at(right);
        const bool both_start = same_time(p.t0, left) && same_time(q.t0, left);
        if (same_position(pm, qm)) {
          report.violations.push_back({ViolationKind::Overlap, mid, pm, 0.0,
                                       "branches coincide inside a slab"});
        } else if (pl > ql && !same_position(pl, ql)) {
          report.violations.push_back({ViolationKind::Overlap, left, pl, pl - ql,
                                       "branches cross inside a slab"});
        } else if (pr > qr && !same_position(pr, qr)) {
          report.violations.push_back({ViolationKind::Overlap, right, pr, pr - qr,
                                       "branches cross inside a slab"});
        } else if (same_position(pl, ql) && !both_start) {
          report.violations.push_back({ViolationKind::Overlap, left, pl, 0.0,
                                       "branches touch away from a junction"});
        }
      }
      const std::size_t a = ids[k], b = ids[k + 1];
      if (desc.merges[a] || desc.merges[b]) continue;
      const double width = desc.hi[a] - desc.lo[b];
      if (width > kNodeTolerance * std::max(1.0, std::abs(desc.hi[a]))) {
        const double s = mirrored ? -mid : mid;
        report.violations.push_back({ViolationKind::Monotonicity, s, bs[a].position_at(mid), width,
                                     mirrored ? "trace order not preserved backward in time"
                                              : "trace order not preserved forward in time"});
      }
    }
  }
}

}  // namespace

TransportTree::TransportTree(std::vector<Branch> branches, Horizon horizon)
    : branches_(std::move(branches)), horizon_(horizon) {
  if (!std::isfinite(horizon.begin) || !std::isfinite(horizon.end) || !(horizon.begin < horizon.end)) {
    throw PreconditionError("horizon must satisfy begin < end");
  }
  for (const Branch& b : branches_) {
    if (!std::isfinite(b.mass) || !(b.mass > 0.0)) throw PreconditionError("branch mass must be positive");
    if (!std::isfinite(b.t0) || !std::isfinite(b.t1) || !std::isfinite(b.x0) || !std::isfinite(b.x1)) {
      throw PreconditionError("branch coordinates must be finite");
    }
    if (!(b.t1 > b.t0)) throw PreconditionError("branch needs t1 > t0");
    if (b.t0 < horizon.begin - kNodeTolerance || b.t1 > horizon.end + kNodeTolerance) {
      throw PreconditionError(fmt("branch [%.17g, %.17g] leaves the horizon", b.t0, b.t1));
    }
  }
}

std::size_t ValidationReport::count(ViolationKind kind) const noexcept {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [kind](const Violation& v) { return v.kind == kind; }));
}

EnergyBreakdown energy(const TransportTree& tree) {
  EnergyBreakdown e;
  for (const Branch& b : tree.branches()) {
    const double dt = b.t1 - b.t0;
    const double dx = b.x1 - b.x0;
    e.length_term += dt;
    e.kinetic_term += b.mass * dx * dx / dt;
  }
  e.total = e.length_term + e.kinetic_term;
  return e;
}

ValidationReport validate(const TransportTree& tree) {
  ValidationReport report;
  const auto bs = tree.branches();
  if (bs.empty()) return report;
  auto [node_of, nodes] = cluster_nodes(bs);
  check_conservation(bs, tree.horizon(), node_of, nodes, report);
  check_slabs(bs, report, false);
  // Backward monotonicity: the same forward check on the time-reversed tree.
  const TransportTree mirrored = mirror_time(tree);
  check_slabs(mirrored.branches(), report, true);
  return report;
}

AtomicMeasure trace_at(const TransportTree& tree, double s) {
  const Horizon h = tree.horizon();
  if (!(s >= h.begin && s <= h.end)) {
    throw PreconditionError("time " + std::to_string(s) + " outside horizon " + fmt("[%.17g, %.17g]", h.begin, h.end));
  }
  const bool at_end = s == h.end;
  std::vector<Atom> atoms;
  for (const Branch& b : tree.branches()) {
    if (b.t0 <= s && s < b.t1) {
      atoms.push_back({b.mass, b.position_at(s)});
    } else if (at_end && b.t1 == s) {
      atoms.push_back({b.mass, b.x1});
    }
  }
  if (atoms.empty()) throw PreconditionError(fmt("no mass alive at time %.17g (horizon end %.17g)", s, h.end));
  return AtomicMeasure(std::move(atoms));
}

TransportTree shear(const TransportTree& tree, double offset, double horizon_length) {
  const Horizon h = tree.horizon();
  if (!(horizon_length > 0.0)) throw PreconditionError("shear needs a positive horizon length");
  if (!same_time(h.begin, 0.0) || h.end > horizon_length + kNodeTolerance) {
    throw PreconditionError("shear needs a tree living in [0, T]");
  }
  if (offset == 0.0) return tree;
  constexpr double kBarycenterTolerance = 1e-9;
  const double b1 = barycenter(trace_at(tree, h.end));
  if (std::abs(b1) > kBarycenterTolerance) {
    throw PreconditionError(fmt("shear precondition violated: final trace barycenter must be 0 (got %.3g, tolerance %.0g)",
                                b1, kBarycenterTolerance));
  }
  std::vector<Branch> out(tree.branches().begin(), tree.branches().end());
  for (Branch& b : out) {
    b.x0 += (1.0 - b.t0 / horizon_length) * offset;
    b.x1 += (1.0 - b.t1 / horizon_length) * offset;
  }
  return TransportTree(std::move(out), h);
}

TransportTree rescale_mass_time(const TransportTree& tree, double phi) {
  if (!std::isfinite(phi) || !(phi > 0.0)) throw PreconditionError("rescale needs phi > 0");
  if (phi == 1.0) return tree;
  const double tau = phi * std::sqrt(phi);
  std::vector<Branch> out(tree.branches().begin(), tree.branches().end());
  for (Branch& b : out) {
    b.mass *= phi;
    b.t0 *= tau;
    b.t1 *= tau;
    b.x0 *= phi;
    b.x1 *= phi;
  }
  const Horizon h = tree.horizon();
  return TransportTree(std::move(out), {h.begin * tau, h.end * tau});
}

TransportTree translate(const TransportTree& tree, double dt, double dx) {
  std::vector<Branch> out(tree.branches().begin(), tree.branches().end());
  for (Branch& b : out) {
    b.t0 += dt;
    b.t1 += dt;
    b.x0 += dx;
    b.x1 += dx;
  }
  const Horizon h = tree.horizon();
  return TransportTree(std::move(out), {h.begin + dt, h.end + dt});
}

TransportTree prepend_stem(const TransportTree& tree, double duration) {
  if (!(duration >= 0.0)) throw PreconditionError("stem duration must be nonnegative");
  if (duration == 0.0) return tree;
  const Horizon h = tree.horizon();
  const AtomicMeasure root = trace_at(tree, h.begin);
  if (root.size() != 1) throw PreconditionError("stem needs a single-atom initial trace");
  const Atom a = root.atoms()[0];
  std::vector<Branch> out;
  out.reserve(tree.size() + 1);
  out.push_back({a.mass, h.begin, h.begin + duration, a.position, a.position});
  for (Branch b : tree.branches()) {
    b.t0 += duration;
    b.t1 += duration;
    out.push_back(b);
  }
  return TransportTree(std::move(out), {h.begin, h.end + duration});
}

TransportTree mirror_time(const TransportTree& tree) {
  std::vector<Branch> out;
  out.reserve(tree.size());
  for (const Branch& b : tree.branches()) out.push_back({b.mass, -b.t1, -b.t0, b.x1, b.x0});
  const Horizon h = tree.horizon();
  return TransportTree(std::move(out), {-h.end, -h.begin});
}

TransportTree combine(std::span<const TransportTree> trees) {
  if (trees.empty()) throw PreconditionError("combine needs at least one tree");
  const Horizon h = trees[0].horizon();
  std::vector<Branch> out;
  for (const TransportTree& t : trees) {
    if (!same_time(t.horizon().begin, h.begin) || !same_time(t.horizon().end, h.end)) {
      throw PreconditionError("combined trees must share one horizon");
    }
    out.insert(out.end(), t.branches().begin(), t.branches().end());
  }
  return TransportTree(std::move(out), h);
}

HolderCheck holder_check(const TransportTree& tree, double s, double s_prime) {
  HolderCheck c;
  c.lhs = w2_squared(trace_at(tree, s), trace_at(tree, s_prime));
  c.rhs = energy(tree).total * std::abs(s - s_prime);
  c.ok = c.lhs <= c.rhs + 1e-12;
  return c;
}

}  // namespace branched
