#ifndef SCOPF_LBLC_HPP
#define SCOPF_LBLC_HPP

#include <string>
#include <vector>

#include "scopf/lpsolve.hpp"
#include "scopf/netmodel.hpp"

namespace scopf {

// DC-linearized SCOPF blocks: per case, angle and dispatch variables with a
// soft balance row per bus.  Voltages, reactive power and rating rows are
// dropped entirely; the recovery step reintroduces them.

struct DcCaseBlock {
  const Contingency* outage = nullptr;  // nullptr for the base block
  std::vector<int> theta;               // per bus
  std::vector<int> p;                   // per generator
  std::vector<int> slack_plus0, slack_minus0;  // first penalty-block var per bus
  int delta = -1;                       // contingency blocks only
  std::vector<int> balance_row;         // per bus
  std::vector<int> response_row;        // per generator; -1 where absent
  int ref_bus = -1;                     // theta pinned to zero here
};

// Optimality cut eta_k >= intercept + gradient . p0.
struct Cut {
  std::string label;
  double intercept = 0.0;
  std::vector<double> gradient;  // per base-case generator
  int source_iteration = 0;
};

// Master p-variables paired with the subproblem rows that carry their fixed
// copies y_k on the right-hand side; bijective over surviving generators.
struct CouplingMap {
  std::vector<int> response_row;  // per generator; -1 for the outaged one
};

inline int dc_reference_bus(const Network& net) {
  int best = -1;
  for (const auto& g : net.generators) {
    int b = net.bus_index(g.bus);
    if (best < 0 || net.buses[b].id < net.buses[best].id) best = b;
  }
  return best < 0 ? 0 : best;
}

namespace detail {

// Appends one DC case block to lp.  For the base block, generation cost is
// encoded with one bounded variable per cost segment (convexity makes the
// fill order automatic).  penalty_weight scales this block's slack prices.
inline DcCaseBlock add_dc_block(LpProblem& lp, const Network& net,
                                const Contingency* outage, double penalty_weight,
                                bool with_cost) {
  DcCaseBlock blk;
  blk.outage = outage;
  blk.ref_bus = dc_reference_bus(net);
  BoundSet bounds = bounds_for(net, outage);

  int nb = static_cast<int>(net.n_buses());
  int ng = static_cast<int>(net.n_gens());
  const auto& blocks = net.penalty_schedule.blocks_balance;

  for (int i = 0; i < nb; ++i)
    blk.theta.push_back(i == blk.ref_bus ? lp.add_var(0.0, 0.0, 0.0)
                                         : lp.add_var(-kInf, kInf, 0.0));
  for (int g = 0; g < ng; ++g)
    blk.p.push_back(lp.add_var(bounds.gen_p[g].lo, bounds.gen_p[g].hi, 0.0));
  if (outage) blk.delta = lp.add_var(-kInf, kInf, 0.0);

  for (int i = 0; i < nb; ++i) {
    blk.slack_plus0.push_back(lp.n());
    for (const auto& b : blocks) lp.add_var(0.0, b.width, penalty_weight * b.price);
    blk.slack_minus0.push_back(lp.n());
    for (const auto& b : blocks) lp.add_var(0.0, b.width, penalty_weight * b.price);
  }

  // balance rows
  for (int i = 0; i < nb; ++i) {
    const auto& bus = net.buses[i];
    int row = lp.add_row(bus.p_load + bus.g_shunt_fixed);
    blk.balance_row.push_back(row);
    for (std::size_t t = 0; t < blocks.size(); ++t) {
      lp.add_coef(row, blk.slack_plus0[i] + static_cast<int>(t), -1.0);
      lp.add_coef(row, blk.slack_minus0[i] + static_cast<int>(t), 1.0);
    }
  }
  for (int g = 0; g < ng; ++g)
    lp.add_coef(blk.balance_row[net.idx.gen_bus[g]], blk.p[g], 1.0);
  for (int b = 0; b < static_cast<int>(net.n_branches()); ++b) {
    if (b == bounds.outaged_branch) continue;
    const auto& br = net.branches[b];
    int o = net.idx.br_from[b], d = net.idx.br_to[b];
    double w = 1.0 / br.x;
    // flow o->d = (theta_o - theta_d - phase)/x, leaving o and entering d
    lp.add_coef(blk.balance_row[o], blk.theta[o], -w);
    lp.add_coef(blk.balance_row[o], blk.theta[d], w);
    lp.add_coef(blk.balance_row[d], blk.theta[o], w);
    lp.add_coef(blk.balance_row[d], blk.theta[d], -w);
    lp.add_to_rhs(blk.balance_row[o], -br.phase * w);
    lp.add_to_rhs(blk.balance_row[d], br.phase * w);
  }

  if (with_cost) {
    for (int g = 0; g < ng; ++g) {
      const auto& gen = net.generators[g];
      int row = lp.add_row(cost_ladder_start(gen));
      lp.add_coef(row, blk.p[g], 1.0);
      for (const auto& seg : cost_segments(gen)) {
        int v = lp.add_var(0.0, seg.width, seg.marginal);
        lp.add_coef(row, v, -1.0);
      }
    }
  }

  blk.response_row.assign(ng, -1);
  return blk;
}

// Response rows p_gk - alpha_g * delta_k = <coupling>, one per surviving
// generator.  The right-hand side is 0 when the master variable column is
// attached (extensive form) or y_g when y is a fixed parameter (subproblem).
inline void add_response_rows(LpProblem& lp, const Network& net, DcCaseBlock& blk,
                              const DcCaseBlock* master_block,
                              const std::vector<double>* y_fixed) {
  BoundSet bounds = bounds_for(net, blk.outage);
  for (int g = 0; g < static_cast<int>(net.n_gens()); ++g) {
    if (g == bounds.outaged_gen) continue;
    double rhs = y_fixed ? (*y_fixed)[g] : 0.0;
    int row = lp.add_row(rhs);
    blk.response_row[g] = row;
    lp.add_coef(row, blk.p[g], 1.0);
    lp.add_coef(row, blk.delta, -net.gen_alpha(g));
    if (master_block) lp.add_coef(row, master_block->p[g], -1.0);
  }
}

}  // namespace detail

struct ExtensiveProblem {
  LpProblem lp;
  DcCaseBlock base;
  std::vector<DcCaseBlock> contingencies;
};

// Extensive form: base DC dispatch plus one coupled DC block per selected
// contingency, penalties weighted 1/K_hat.
inline ExtensiveProblem build_extensive(const Network& net,
                                        const std::vector<Contingency>& khat) {
  ExtensiveProblem ext;
  ext.base = detail::add_dc_block(ext.lp, net, nullptr, 1.0, true);
  double w = khat.empty() ? 1.0 : 1.0 / static_cast<double>(khat.size());
  for (const auto& con : khat) {
    auto blk = detail::add_dc_block(ext.lp, net, &con, w, false);
    detail::add_response_rows(ext.lp, net, blk, &ext.base, nullptr);
    ext.contingencies.push_back(std::move(blk));
  }
  return ext;
}

struct MasterProblem {
  LpProblem lp;
  DcCaseBlock base;
  std::vector<int> eta;  // epigraph variable per selected contingency
};

// Base DC dispatch plus one epigraph variable per contingency, lower-bounded
// by the optimality cuts accumulated so far.
inline MasterProblem build_master(const Network& net, const std::vector<Contingency>& khat,
                                  const std::vector<Cut>& cut_pool) {
  MasterProblem mp;
  mp.base = detail::add_dc_block(mp.lp, net, nullptr, 1.0, true);
  double w = khat.empty() ? 1.0 : 1.0 / static_cast<double>(khat.size());
  for (const auto& con : khat) {
    // subproblem values are penalties, never negative
    mp.eta.push_back(mp.lp.add_var(0.0, kInf, w));
    (void)con;
  }
  for (const auto& cut : cut_pool) {
    int k = -1;
    for (std::size_t i = 0; i < khat.size(); ++i)
      if (khat[i].label == cut.label) k = static_cast<int>(i);
    if (k < 0) continue;
    // eta_k - g.p0 - surplus = intercept
    int row = mp.lp.add_row(cut.intercept);
    mp.lp.add_coef(row, mp.eta[k], 1.0);
    for (int g = 0; g < static_cast<int>(net.n_gens()); ++g)
      mp.lp.add_coef(row, mp.base.p[g], -cut.gradient[g]);
    int surplus = mp.lp.add_var(0.0, kInf, 0.0);
    mp.lp.add_coef(row, surplus, -1.0);
  }
  return mp;
}

struct SubProblem {
  LpProblem lp;
  DcCaseBlock block;
  CouplingMap coupling;
};

// Contingency-k DC block with the master dispatch fixed on the right-hand
// side of the response rows.  Soft balance keeps it feasible for every y
// within master bounds, so only optimality cuts are ever needed.
inline SubProblem build_subproblem(const Network& net, const Contingency& con,
                                   const std::vector<double>& y_fixed) {
  SubProblem sp;
  sp.block = detail::add_dc_block(sp.lp, net, &con, 1.0, false);
  detail::add_response_rows(sp.lp, net, sp.block, nullptr, &y_fixed);
  sp.coupling.response_row = sp.block.response_row;
  return sp;
}

}  // namespace scopf

#endif  // SCOPF_LBLC_HPP
