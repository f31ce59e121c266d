#ifndef SCOPF_NETMODEL_HPP
#define SCOPF_NETMODEL_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scopf/util.hpp"

namespace scopf {

// Grid data model.  All quantities are per-unit on base_power; file I/O is
// responsible for any conversion to physical units.

struct Bus {
  int id = 0;
  double v_min = 0.9, v_max = 1.1;              // normal voltage band
  double v_min_emerg = 0.85, v_max_emerg = 1.15;  // post-contingency band
  double p_load = 0.0, q_load = 0.0;            // constant-power load
  double g_shunt_fixed = 0.0, b_shunt_fixed = 0.0;
  double b_cs_min = 0.0, b_cs_max = 0.0;        // switched shunt susceptance range
};

// One breakpoint of a convex piecewise-linear cost: the marginal cost applies
// from this output level up to the next breakpoint (the last one extends up).
struct CostPoint {
  double p = 0.0;
  double marginal = 0.0;  // money/h per per-unit
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min = 0.0, p_max = 0.0;
  double q_min = 0.0, q_max = 0.0;
  double alpha = -1.0;  // participation factor; <0 means "defaulted to p_max"
  std::vector<CostPoint> cost_points;
};

struct Branch {
  int id = 0;
  int from_bus = 0, to_bus = 0;
  double r = 0.0, x = 0.0;
  double b_ch = 0.0;    // total charging susceptance
  double tap = 1.0;     // off-nominal ratio on the from side
  double phase = 0.0;   // radians
  double rating_normal = 0.0, rating_emerg = 0.0;  // apparent-power ratings
};

struct PenaltyBlock {
  double width = 0.0;  // per-unit; last block is unbounded (kInf)
  double price = 0.0;  // money/h per per-unit
};

struct PenaltySchedule {
  std::vector<PenaltyBlock> blocks_balance;
  std::vector<PenaltyBlock> blocks_rating;
};

inline PenaltySchedule default_penalty_schedule() {
  PenaltySchedule s;
  s.blocks_balance = {{0.02, 1e3}, {0.48, 5e3}, {kInf, 1e6}};
  s.blocks_rating = s.blocks_balance;
  return s;
}

enum class OutageKind { Generator, Branch };

struct Contingency {
  std::string label;
  OutageKind kind = OutageKind::Generator;
  int element = 0;  // generator or branch id
};

struct Network {
  double base_power = 100.0;  // MVA
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Branch> branches;
  PenaltySchedule penalty_schedule = default_penalty_schedule();

  // Resolved index structures. Filled by finalize(); the network is immutable
  // afterwards, so concurrent readers are safe.
  struct Index {
    std::unordered_map<int, int> bus_pos, gen_pos, branch_pos;
    std::vector<int> gen_bus;                 // generator -> bus index
    std::vector<int> br_from, br_to;          // branch -> bus indices
    std::vector<std::vector<int>> gens_at_bus;
    bool ready = false;
  } idx;

  std::size_t n_buses() const { return buses.size(); }
  std::size_t n_gens() const { return generators.size(); }
  std::size_t n_branches() const { return branches.size(); }

  int bus_index(int id) const {
    auto it = idx.bus_pos.find(id);
    return it == idx.bus_pos.end() ? -1 : it->second;
  }
  int gen_index(int id) const {
    auto it = idx.gen_pos.find(id);
    return it == idx.gen_pos.end() ? -1 : it->second;
  }
  int branch_index(int id) const {
    auto it = idx.branch_pos.find(id);
    return it == idx.branch_pos.end() ? -1 : it->second;
  }

  double gen_alpha(int g) const {
    const auto& gen = generators[g];
    return gen.alpha >= 0.0 ? gen.alpha : gen.p_max;
  }

  // Builds the index maps. Call once after the record lists are complete and
  // reference-valid (validate() reports dangling references first).
  void finalize() {
    idx = Index{};
    for (int i = 0; i < static_cast<int>(buses.size()); ++i)
      idx.bus_pos.emplace(buses[i].id, i);
    idx.gens_at_bus.assign(buses.size(), {});
    for (int g = 0; g < static_cast<int>(generators.size()); ++g) {
      idx.gen_pos.emplace(generators[g].id, g);
      int b = bus_index(generators[g].bus);
      idx.gen_bus.push_back(b);
      if (b >= 0) idx.gens_at_bus[b].push_back(g);
    }
    for (int b = 0; b < static_cast<int>(branches.size()); ++b) {
      idx.branch_pos.emplace(branches[b].id, b);
      idx.br_from.push_back(bus_index(branches[b].from_bus));
      idx.br_to.push_back(bus_index(branches[b].to_bus));
    }
    idx.ready = true;
  }
};

// --- validation ---------------------------------------------------------------

namespace detail {
inline void check(std::vector<std::string>& out, bool ok, const std::string& msg) {
  if (!ok) out.push_back(msg);
}
}  // namespace detail

// Returns an empty list iff the data invariants hold. Violations are data,
// not failures: each entry names the offending record and rule.
inline std::vector<std::string> validate(const Network& net) {
  using detail::check;
  std::vector<std::string> v;
  check(v, net.base_power > 0.0, "network: base_power must be > 0");

  std::unordered_map<int, int> bus_ids;
  for (const auto& b : net.buses) {
    std::string tag = "bus " + std::to_string(b.id);
    check(v, bus_ids.emplace(b.id, 1).second, tag + ": duplicate id");
    check(v, b.v_min <= b.v_max, tag + ": v_min > v_max");
    check(v, b.v_min_emerg <= b.v_min, tag + ": v_min_emerg > v_min");
    check(v, b.v_max <= b.v_max_emerg, tag + ": v_max > v_max_emerg");
    check(v, b.b_cs_min <= b.b_cs_max, tag + ": b_cs_min > b_cs_max");
  }
  auto bus_exists = [&](int id) { return bus_ids.count(id) > 0; };

  std::unordered_map<int, int> seen;
  for (const auto& g : net.generators) {
    std::string tag = "generator " + std::to_string(g.id);
    check(v, seen.emplace(g.id, 1).second, tag + ": duplicate id");
    check(v, bus_exists(g.bus), tag + ": references missing bus " + std::to_string(g.bus));
    check(v, g.p_min <= g.p_max, tag + ": p_min > p_max");
    check(v, g.q_min <= g.q_max, tag + ": q_min > q_max");
    check(v, !std::isnan(g.alpha) && (g.alpha == -1.0 || g.alpha >= 0.0),
          tag + ": alpha must be >= 0 (or -1 for the p_max default)");
    check(v, !g.cost_points.empty(), tag + ": empty cost curve");
    for (std::size_t i = 1; i < g.cost_points.size(); ++i) {
      check(v, g.cost_points[i - 1].p < g.cost_points[i].p,
            tag + ": cost_points not strictly increasing in p");
      check(v, g.cost_points[i - 1].marginal <= g.cost_points[i].marginal,
            tag + ": marginal costs decrease (non-convex curve)");
    }
  }

  seen.clear();
  for (const auto& b : net.branches) {
    std::string tag = "branch " + std::to_string(b.id);
    check(v, seen.emplace(b.id, 1).second, tag + ": duplicate id");
    check(v, bus_exists(b.from_bus), tag + ": references missing bus " + std::to_string(b.from_bus));
    check(v, bus_exists(b.to_bus), tag + ": references missing bus " + std::to_string(b.to_bus));
    check(v, b.x != 0.0, tag + ": x must be nonzero");
    check(v, b.tap > 0.0, tag + ": tap must be > 0");
    check(v, b.rating_normal > 0.0, tag + ": rating_normal must be > 0");
    check(v, b.rating_normal <= b.rating_emerg, tag + ": rating_normal > rating_emerg");
  }

  auto check_blocks = [&](const std::vector<PenaltyBlock>& blocks, const char* name) {
    check(v, !blocks.empty(), std::string("penalty ") + name + ": empty schedule");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      check(v, blocks[i].width > 0.0, std::string("penalty ") + name + ": nonpositive width");
      if (i > 0)
        check(v, blocks[i - 1].price < blocks[i].price,
              std::string("penalty ") + name + ": prices not strictly increasing");
      if (i + 1 < blocks.size())
        check(v, std::isfinite(blocks[i].width),
              std::string("penalty ") + name + ": only the final block may be unbounded");
    }
  };
  check_blocks(net.penalty_schedule.blocks_balance, "balance");
  check_blocks(net.penalty_schedule.blocks_rating, "rating");
  return v;
}

// --- bound sets ---------------------------------------------------------------

struct VarBounds {
  double lo = -kInf, hi = kInf;
};

// Per-variable bounds for one case index k. Angles and the adjustment Delta
// are unbounded and therefore not materialized here.
struct BoundSet {
  bool is_contingency = false;
  int outaged_gen = -1;     // network generator index, or -1
  int outaged_branch = -1;  // network branch index, or -1
  std::vector<VarBounds> bus_v;
  std::vector<VarBounds> bus_bcs;
  std::vector<VarBounds> gen_p, gen_q;
  std::vector<char> branch_active;    // rating row present for this case
  std::vector<double> branch_rating;  // applicable rating where active

  bool gen_in_service(int g) const { return g != outaged_gen; }
  bool branch_in_service(int b) const { return branch_active.empty() ? true : branch_active[b] != 0; }
};

// Bounds for the base case (outage == nullptr) or a contingency case.
// Contingency cases use emergency limits; a generator outage pins the unit's
// p and q to [0,0]; a branch outage drops the branch's rating row.
inline BoundSet bounds_for(const Network& net, const Contingency* outage) {
  BoundSet bs;
  bs.is_contingency = outage != nullptr;
  if (outage) {
    if (outage->kind == OutageKind::Generator) {
      bs.outaged_gen = net.gen_index(outage->element);
      if (bs.outaged_gen < 0)
        throw std::runtime_error("contingency '" + outage->label +
                                 "': unknown generator " + std::to_string(outage->element));
    } else {
      bs.outaged_branch = net.branch_index(outage->element);
      if (bs.outaged_branch < 0)
        throw std::runtime_error("contingency '" + outage->label +
                                 "': unknown branch " + std::to_string(outage->element));
    }
  }
  bs.bus_v.reserve(net.n_buses());
  bs.bus_bcs.reserve(net.n_buses());
  for (const auto& b : net.buses) {
    if (bs.is_contingency)
      bs.bus_v.push_back({b.v_min_emerg, b.v_max_emerg});
    else
      bs.bus_v.push_back({b.v_min, b.v_max});
    bs.bus_bcs.push_back({b.b_cs_min, b.b_cs_max});
  }
  for (int g = 0; g < static_cast<int>(net.n_gens()); ++g) {
    const auto& gen = net.generators[g];
    if (g == bs.outaged_gen) {
      bs.gen_p.push_back({0.0, 0.0});
      bs.gen_q.push_back({0.0, 0.0});
    } else {
      bs.gen_p.push_back({gen.p_min, gen.p_max});
      bs.gen_q.push_back({gen.q_min, gen.q_max});
    }
  }
  bs.branch_active.resize(net.n_branches(), 1);
  bs.branch_rating.resize(net.n_branches(), 0.0);
  for (int b = 0; b < static_cast<int>(net.n_branches()); ++b) {
    if (b == bs.outaged_branch) {
      bs.branch_active[b] = 0;
      continue;
    }
    bs.branch_rating[b] =
        bs.is_contingency ? net.branches[b].rating_emerg : net.branches[b].rating_normal;
  }
  return bs;
}

// --- cost curve helpers ---------------------------------------------------------

struct CostSegment {
  double width;     // per-unit, may be kInf for the last segment
  double marginal;  // money/h per per-unit
};

// Expands a generator's breakpoints into a segment ladder starting at
// min(p_min, first breakpoint). Piecewise-constant marginals; the first
// marginal extends below the first breakpoint, the last one above the last.
inline double cost_ladder_start(const Generator& g) {
  return std::min(g.p_min, g.cost_points.front().p);
}

inline std::vector<CostSegment> cost_segments(const Generator& g) {
  const auto& pts = g.cost_points;
  std::vector<CostSegment> segs;
  double start = cost_ladder_start(g);
  if (start < pts.front().p) segs.push_back({pts.front().p - start, pts.front().marginal});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    segs.push_back({pts[i + 1].p - pts[i].p, pts[i].marginal});
  double tail = std::max(g.p_max, pts.back().p) - pts.back().p;
  if (tail > 0.0 || segs.empty()) segs.push_back({std::max(tail, 0.0), pts.back().marginal});
  return segs;
}

// Convex piecewise-linear cost at output p, zero at the ladder start.
inline double cost_at(const Generator& g, double p) {
  double start = cost_ladder_start(g);
  if (p <= start) return g.cost_points.front().marginal * (p - start);
  double cost = 0.0, pos = start;
  for (const auto& s : cost_segments(g)) {
    double take = std::min(p - pos, s.width);
    if (take <= 0.0) break;
    cost += take * s.marginal;
    pos += take;
  }
  if (p > pos) cost += (p - pos) * g.cost_points.back().marginal;
  return cost;
}

}  // namespace scopf

#endif  // SCOPF_NETMODEL_HPP
