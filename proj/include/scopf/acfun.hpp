#ifndef SCOPF_ACFUN_HPP
#define SCOPF_ACFUN_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "scopf/netmodel.hpp"

namespace scopf {

// Primary decision vector x_k: per-bus voltage magnitude, angle, switched
// shunt; per-generator p and q; the real-power adjustment Delta is present
// only for contingency points.
struct OperatingPoint {
  std::vector<double> v;      // per-unit
  std::vector<double> theta;  // radians
  std::vector<double> b_cs;   // per-unit susceptance
  std::vector<double> p, q;   // per-unit, per generator
  std::optional<double> delta;

  static OperatingPoint zeros(const Network& net) {
    OperatingPoint x;
    x.v.assign(net.n_buses(), 1.0);
    x.theta.assign(net.n_buses(), 0.0);
    x.b_cs.assign(net.n_buses(), 0.0);
    x.p.assign(net.n_gens(), 0.0);
    x.q.assign(net.n_gens(), 0.0);
    return x;
  }
  bool dimensioned_to(const Network& net) const {
    return v.size() == net.n_buses() && theta.size() == net.n_buses() &&
           b_cs.size() == net.n_buses() && p.size() == net.n_gens() &&
           q.size() == net.n_gens();
  }
};

// Slack vector s_k = (s^f+, s^f-, s^g), all nonnegative.
struct SlackBundle {
  std::vector<double> p_plus, p_minus;  // per bus, real-power axis
  std::vector<double> q_plus, q_minus;  // per bus, reactive axis
  std::vector<double> rating;           // per branch; zero where not in service
};

struct BusResiduals {
  std::vector<double> dp, dq;  // positive = surplus injection
};

struct BranchFlow {
  bool in_service = false;
  double p_from = 0, q_from = 0;  // into the branch at the origin
  double p_to = 0, q_to = 0;      // into the branch at the destination
  double s_from = 0, s_to = 0;    // apparent power magnitudes
};

// Two-port admittance of a pi-model branch with off-nominal tap (from side)
// and phase shift.
struct BranchAdmittance {
  std::complex<double> yff, yft, ytf, ytt;
};

inline BranchAdmittance branch_admittance(const Branch& br) {
  std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
  std::complex<double> yc(0.0, br.b_ch / 2.0);
  std::complex<double> tap = std::polar(br.tap, br.phase);
  BranchAdmittance a;
  a.yff = (ys + yc) / (br.tap * br.tap);
  a.yft = -ys / std::conj(tap);
  a.ytf = -ys / tap;
  a.ytt = ys + yc;
  return a;
}

inline std::vector<BranchFlow> branch_flows(const Network& net, const OperatingPoint& x,
                                            const Contingency* outage = nullptr) {
  int skip = -1;
  if (outage && outage->kind == OutageKind::Branch) skip = net.branch_index(outage->element);
  std::vector<BranchFlow> flows(net.n_branches());
  for (int b = 0; b < static_cast<int>(net.n_branches()); ++b) {
    if (b == skip) continue;
    const auto& br = net.branches[b];
    int i = net.idx.br_from[b], j = net.idx.br_to[b];
    auto a = branch_admittance(br);
    std::complex<double> vi = std::polar(x.v[i], x.theta[i]);
    std::complex<double> vj = std::polar(x.v[j], x.theta[j]);
    std::complex<double> sf = vi * std::conj(a.yff * vi + a.yft * vj);
    std::complex<double> st = vj * std::conj(a.ytf * vi + a.ytt * vj);
    auto& f = flows[b];
    f.in_service = true;
    f.p_from = sf.real();
    f.q_from = sf.imag();
    f.p_to = st.real();
    f.q_to = st.imag();
    f.s_from = std::abs(sf);
    f.s_to = std::abs(st);
  }
  return flows;
}

// Power balance residuals f_k: generation minus load, shunt consumption and
// branch flows out of each bus.  An outaged generator's output is ignored even
// if the point carries a nonzero entry for it.
inline BusResiduals balance_residuals(const Network& net, const OperatingPoint& x,
                                      const Contingency* outage = nullptr) {
  int skip_gen = -1;
  if (outage && outage->kind == OutageKind::Generator) skip_gen = net.gen_index(outage->element);
  BusResiduals r;
  r.dp.assign(net.n_buses(), 0.0);
  r.dq.assign(net.n_buses(), 0.0);
  for (int i = 0; i < static_cast<int>(net.n_buses()); ++i) {
    const auto& bus = net.buses[i];
    double v2 = sq(x.v[i]);
    r.dp[i] = -bus.p_load - v2 * bus.g_shunt_fixed;
    r.dq[i] = -bus.q_load + v2 * (bus.b_shunt_fixed + x.b_cs[i]);
  }
  for (int g = 0; g < static_cast<int>(net.n_gens()); ++g) {
    if (g == skip_gen) continue;
    int i = net.idx.gen_bus[g];
    r.dp[i] += x.p[g];
    r.dq[i] += x.q[g];
  }
  auto flows = branch_flows(net, x, outage);
  for (int b = 0; b < static_cast<int>(net.n_branches()); ++b) {
    if (!flows[b].in_service) continue;
    int i = net.idx.br_from[b], j = net.idx.br_to[b];
    r.dp[i] -= flows[b].p_from;
    r.dq[i] -= flows[b].q_from;
    r.dp[j] -= flows[b].p_to;
    r.dq[j] -= flows[b].q_to;
  }
  return r;
}

// Rating overloads g_k: max(0, |S| - rating) over both branch ends, using the
// rating applicable to the case.  The outaged branch is excluded (entry 0).
inline std::vector<double> rating_overloads(const Network& net, const OperatingPoint& x,
                                            const Contingency* outage = nullptr) {
  auto flows = branch_flows(net, x, outage);
  bool emerg = outage != nullptr;
  std::vector<double> over(net.n_branches(), 0.0);
  for (int b = 0; b < static_cast<int>(net.n_branches()); ++b) {
    if (!flows[b].in_service) continue;
    double rating = emerg ? net.branches[b].rating_emerg : net.branches[b].rating_normal;
    over[b] = std::max(0.0, std::max(flows[b].s_from, flows[b].s_to) - rating);
  }
  return over;
}

// Generator response h_k.  The real part is the deviation from the clipped
// participation law; the reactive part is the PV/PQ complementarity against
// the base voltage at the generator's bus, with tolerance tau_v deciding the
// v_k == v_0 branch.
constexpr double kTauV = 1e-6;

struct GenResponseResidual {
  double real = 0.0;
  double reactive = 0.0;
  double voltage_gap = 0.0;  // v_k - v_0 at the generator's bus
};

inline double response_clip(const Network& net, int g, double p0, double delta) {
  const auto& gen = net.generators[g];
  return std::min(gen.p_max, std::max(gen.p_min, p0 + net.gen_alpha(g) * delta));
}

inline std::vector<GenResponseResidual> response_residuals(const Network& net,
                                                           const OperatingPoint& base,
                                                           const OperatingPoint& con,
                                                           const Contingency& outage,
                                                           double tau_v = kTauV) {
  int skip_gen =
      outage.kind == OutageKind::Generator ? net.gen_index(outage.element) : -1;
  double delta = con.delta.value_or(0.0);
  std::vector<GenResponseResidual> res(net.n_gens());
  for (int g = 0; g < static_cast<int>(net.n_gens()); ++g) {
    if (g == skip_gen) continue;
    auto& r = res[g];
    r.real = con.p[g] - response_clip(net, g, base.p[g], delta);
    int bus = net.idx.gen_bus[g];
    r.voltage_gap = con.v[bus] - base.v[bus];
    if (std::abs(r.voltage_gap) <= tau_v)
      r.reactive = 0.0;
    else if (r.voltage_gap < 0.0)
      r.reactive = con.q[g] - net.generators[g].q_max;
    else
      r.reactive = con.q[g] - net.generators[g].q_min;
  }
  return res;
}

// Base-case generation cost c(x_0).
inline double base_cost(const Network& net, const OperatingPoint& x) {
  double total = 0.0;
  for (int g = 0; g < static_cast<int>(net.n_gens()); ++g)
    total += cost_at(net.generators[g], x.p[g]);
  return total;
}

// Price of one slack magnitude under a block schedule: fill blocks in order.
inline double block_price(double slack, const std::vector<PenaltyBlock>& blocks) {
  double cost = 0.0, left = std::max(0.0, slack);
  for (const auto& b : blocks) {
    double take = std::min(left, b.width);
    cost += take * b.price;
    left -= take;
    if (left <= 0.0) break;
  }
  return cost;
}

// Penalty cost c_k(s_k), scaled by weight (1 for the base case, 1/K for each
// contingency case).
inline double penalty_cost(const SlackBundle& s, const PenaltySchedule& sched,
                           double weight = 1.0) {
  double total = 0.0;
  for (double v : s.p_plus) total += block_price(v, sched.blocks_balance);
  for (double v : s.p_minus) total += block_price(v, sched.blocks_balance);
  for (double v : s.q_plus) total += block_price(v, sched.blocks_balance);
  for (double v : s.q_minus) total += block_price(v, sched.blocks_balance);
  for (double v : s.rating) total += block_price(v, sched.blocks_rating);
  return weight * total;
}

// Minimal-penalty slack assignment for a fixed point: sign-split balance
// residuals, overloads as rating slack.  Minimality follows from the block
// prices being positive and increasing.
inline SlackBundle slacks_from_point(const Network& net, const OperatingPoint& x,
                                     const Contingency* outage = nullptr) {
  auto r = balance_residuals(net, x, outage);
  SlackBundle s;
  s.p_plus.resize(net.n_buses());
  s.p_minus.resize(net.n_buses());
  s.q_plus.resize(net.n_buses());
  s.q_minus.resize(net.n_buses());
  for (std::size_t i = 0; i < net.n_buses(); ++i) {
    s.p_plus[i] = std::max(0.0, r.dp[i]);
    s.p_minus[i] = std::max(0.0, -r.dp[i]);
    s.q_plus[i] = std::max(0.0, r.dq[i]);
    s.q_minus[i] = std::max(0.0, -r.dq[i]);
  }
  s.rating = rating_overloads(net, x, outage);
  return s;
}

}  // namespace scopf

#endif  // SCOPF_ACFUN_HPP
