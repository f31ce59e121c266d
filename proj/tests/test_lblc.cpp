#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lp_oracle.hpp"
#include "scopf/acfun.hpp"
#include "scopf/lblc.hpp"
#include "testnets.hpp"

using namespace scopf;

namespace {

// single-bus network with an outage-vulnerable big unit and a small unit that
// does not participate in frequency response (alpha = 0): the subproblem value
// becomes a hand-computable V-shaped function of y.
Network vee_net() {
  Network net;
  net.buses = {testnets::mk_bus(1, 0.5, 0.0)};
  net.generators = {
      testnets::mk_gen(1, 1, 0.0, 1.0, -1, 1, {{0.0, 10.0}}),
      testnets::mk_gen(2, 1, 0.0, 0.6, -1, 1, {{0.0, 20.0}}),
  };
  net.generators[0].alpha = 1.0;
  net.generators[1].alpha = 0.0;
  net.finalize();
  return net;
}

double solve_value(const LpProblem& p) {
  auto s = solve(p);
  REQUIRE(s.status == LpStatus::Optimal);
  return s.objective;
}

}  // namespace

TEST_CASE("single bus, no contingencies: forced balance") {
  auto net = testnets::one_bus();
  auto ext = build_extensive(net, {});
  auto sol = solve(ext.lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[ext.base.p[0]] == Catch::Approx(0.5));
  CHECK(sol.objective == Catch::Approx(cost_at(net.generators[0], 0.5)));
  // zero slack at the optimum
  for (int t = 0; t < 3; ++t) {
    CHECK(sol.x[ext.base.slack_plus0[0] + t] == Catch::Approx(0.0).margin(1e-10));
    CHECK(sol.x[ext.base.slack_minus0[0] + t] == Catch::Approx(0.0).margin(1e-10));
  }
  // vertex-enumeration oracle on the same built LP
  auto expect = lporacle::brute_force_optimum(ext.lp);
  REQUIRE(expect.has_value());
  CHECK(sol.objective == Catch::Approx(*expect).margin(1e-8));
}

TEST_CASE("branch outage islands the load; slack absorbs it") {
  double load = 0.2;
  auto net = testnets::two_bus_lossless(0.1, load);
  Contingency c{"L1_OUT", OutageKind::Branch, 1};
  auto ext = build_extensive(net, {c});

  // the contingency block carries no flow coefficients for the outaged branch:
  // bus-2 balance row touches only its own slack columns
  const auto& blk = ext.contingencies[0];
  int row2 = blk.balance_row[1];
  for (int v : blk.theta)
    for (auto [r, a] : ext.lp.cols[v]) CHECK(r != row2);

  auto sol = solve(ext.lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // hand value: base serves the load exactly; the islanded load is bought
  // back through the balance blocks at the contingency weight 1/1
  double expected = cost_at(net.generators[0], load) +
                    block_price(load, net.penalty_schedule.blocks_balance);
  CHECK(sol.objective == Catch::Approx(expected).epsilon(1e-9));
  CHECK(sol.x[ext.base.p[0]] == Catch::Approx(load));
}

TEST_CASE("generator outage pins the unit and shifts survivors through delta") {
  auto net = testnets::two_bus();
  Contingency c{"G2_OUT", OutageKind::Generator, 2};
  auto ext = build_extensive(net, {c});
  const auto& blk = ext.contingencies[0];
  CHECK(ext.lp.lo[blk.p[1]] == 0.0);
  CHECK(ext.lp.hi[blk.p[1]] == 0.0);
  CHECK(blk.response_row[1] == -1);
  REQUIRE(blk.response_row[0] >= 0);

  auto sol = solve(ext.lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  double p0 = sol.x[ext.base.p[0]];
  double pk = sol.x[blk.p[0]];
  double delta = sol.x[blk.delta];
  CHECK(pk == Catch::Approx(p0 + net.gen_alpha(0) * delta).margin(1e-9));
  CHECK(sol.x[blk.p[1]] == 0.0);
  // the survivor picks up the lost output
  CHECK(delta > 0.0);
}

TEST_CASE("empty cut pool: master equals the pure DC OPF") {
  auto net = testnets::nine_bus();
  auto khat = testnets::nine_bus_contingencies();
  auto master = build_master(net, khat, {});
  auto plain = build_extensive(net, {});
  double a = solve_value(master.lp);
  double b = solve_value(plain.lp);
  CHECK(a == Catch::Approx(b).margin(1e-8));
}

TEST_CASE("cuts only tighten the master") {
  auto net = testnets::two_bus();
  auto khat = testnets::two_bus_contingencies();
  std::vector<Cut> pool;
  auto m0 = build_master(net, khat, pool);
  auto s0 = solve(m0.lp);
  REQUIRE(s0.status == LpStatus::Optimal);

  std::vector<double> y(net.n_gens());
  for (std::size_t g = 0; g < net.n_gens(); ++g) y[g] = s0.x[m0.base.p[g]];
  for (const auto& con : khat) {
    auto sp = build_subproblem(net, con, y);
    auto ss = solve(sp.lp);
    REQUIRE(ss.status == LpStatus::Optimal);
    Cut cut;
    cut.label = con.label;
    cut.gradient.assign(net.n_gens(), 0.0);
    double gy = 0.0;
    for (std::size_t g = 0; g < net.n_gens(); ++g) {
      int row = sp.coupling.response_row[g];
      if (row < 0) continue;
      cut.gradient[g] = ss.y[row];
      gy += cut.gradient[g] * y[g];
    }
    cut.intercept = ss.objective - gy;
    pool.push_back(cut);
  }
  auto m1 = build_master(net, khat, pool);
  auto s1 = solve(m1.lp);
  REQUIRE(s1.status == LpStatus::Optimal);
  CHECK(s1.objective >= s0.objective - 1e-9);
}

TEST_CASE("subproblem value function is the hand-computable vee") {
  auto net = vee_net();
  Contingency c{"G1_OUT", OutageKind::Generator, 1};

  auto q = [&](double y2) {
    std::vector<double> y = {0.25, y2};
    auto sp = build_subproblem(net, c, y);
    auto s = solve(sp.lp);
    REQUIRE(s.status == LpStatus::Optimal);
    return s.objective;
  };

  // benign: the survivor copy matches the load exactly
  CHECK(q(0.5) == Catch::Approx(0.0).margin(1e-10));
  // y = 0: the whole load is unserved in this block
  double full = block_price(0.5, net.penalty_schedule.blocks_balance);
  CHECK(q(0.0) == Catch::Approx(full).epsilon(1e-9));
  CHECK(full == Catch::Approx(2420.0));

  // convex piecewise-linear: sampled chords lie above function values
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(rng), b = u(rng), lam = 0.37;
    double mid = lam * a + (1 - lam) * b;
    CHECK(lam * q(a) + (1 - lam) * q(b) >= q(mid) - 1e-7);
  }
}

TEST_CASE("subproblems stay feasible for any y within master bounds") {
  auto net = testnets::nine_bus();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& con : testnets::nine_bus_contingencies()) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> y(net.n_gens());
      for (std::size_t g = 0; g < net.n_gens(); ++g) {
        const auto& gen = net.generators[g];
        y[g] = gen.p_min + u(rng) * (gen.p_max - gen.p_min);
      }
      auto sp = build_subproblem(net, con, y);
      auto s = solve(sp.lp);
      CHECK(s.status == LpStatus::Optimal);
    }
  }
}

TEST_CASE("subproblem duals price y-perturbations to first order") {
  auto net = testnets::nine_bus();
  Contingency con = testnets::nine_bus_contingencies()[0];  // G2 outage
  std::vector<double> y = {1.0123, 0.7561, 0.5087};
  auto sp = build_subproblem(net, con, y);
  auto s = solve(sp.lp);
  REQUIRE(s.status == LpStatus::Optimal);
  double step = 1e-5;
  for (std::size_t g = 0; g < net.n_gens(); ++g) {
    int row = sp.coupling.response_row[g];
    if (row < 0) continue;
    auto y2 = y;
    y2[g] += step;
    auto sp2 = build_subproblem(net, con, y2);
    auto s2 = solve(sp2.lp);
    REQUIRE(s2.status == LpStatus::Optimal);
    CHECK(s2.objective - s.objective ==
          Catch::Approx(s.y[row] * step).margin(1e-6 * std::max(1.0, std::abs(s.objective))));
  }
}
