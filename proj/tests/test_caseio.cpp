#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "scopf/caseio.hpp"
#include "testnets.hpp"

using namespace scopf;

namespace {

const char* kMinimalCase = R"(# two-bus demo
[meta]
base_power,100.0
[buses]
# id,v_min,v_max,v_min_emerg,v_max_emerg,p_load,q_load,g_sh,b_sh,bcs_min,bcs_max
1,0.95,1.05,0.90,1.10,0.0,0.0,0.0,0.0,0.0,0.0
2,0.95,1.05,0.90,1.10,0.4,0.1,0.0,0.0,0.0,0.2
[generators]
1,1,0.0,1.5,-1.0,1.0,,0.0,10.0,0.8,25.0
2,2,0.0,0.5,-0.5,0.5,0.4,0.0,30.0
[branches]
1,1,2,0.01,0.10,0.02,1.0,0.0,1.0,1.2
2,1,2,0.02,0.25,0.00,1.0,0.0,0.6,0.7
)";

OperatingPoint random_point(const Network& net, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto x = OperatingPoint::zeros(net);
  for (std::size_t i = 0; i < net.n_buses(); ++i) {
    const auto& b = net.buses[i];
    x.v[i] = b.v_min + u(rng) * (b.v_max - b.v_min);
    x.theta[i] = -0.5 + u(rng);
    x.b_cs[i] = b.b_cs_min + u(rng) * (b.b_cs_max - b.b_cs_min);
  }
  for (std::size_t g = 0; g < net.n_gens(); ++g) {
    const auto& gen = net.generators[g];
    x.p[g] = gen.p_min + u(rng) * (gen.p_max - gen.p_min);
    x.q[g] = gen.q_min + u(rng) * (gen.q_max - gen.q_min);
  }
  return x;
}

}  // namespace

TEST_CASE("minimal case parses") {
  std::istringstream in(kMinimalCase);
  auto net = parse_case(in);
  REQUIRE(net.n_buses() == 2);
  REQUIRE(net.n_gens() == 2);
  REQUIRE(net.n_branches() == 2);
  CHECK(net.base_power == 100.0);
  // blank alpha field defaults to p_max
  CHECK(net.generators[0].alpha == -1.0);
  CHECK(net.gen_alpha(0) == 1.5);
  CHECK(net.generators[1].alpha == 0.4);
  // omitted [penalties] section keeps the default schedule
  REQUIRE(net.penalty_schedule.blocks_balance.size() == 3);
  CHECK(net.penalty_schedule.blocks_balance[0].width == 0.02);
  CHECK(net.penalty_schedule.blocks_balance[2].price == 1e6);
}

TEST_CASE("duplicate bus id is rejected with its name") {
  std::string text = kMinimalCase;
  text += "[buses]\n1,0.95,1.05,0.90,1.10,0,0,0,0,0,0\n";
  std::istringstream in(text);
  REQUIRE_THROWS_WITH(parse_case(in), Catch::Matchers::ContainsSubstring("bus 1"));
}

TEST_CASE("syntax errors carry line numbers") {
  std::istringstream in("[buses]\nnot,a,bus\n");
  try {
    parse_case(in);
    FAIL("expected parse error");
  } catch (const CaseParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("custom penalty schedule is honored") {
  std::string text = kMinimalCase;
  text += "[penalties]\nbalance,0.01,500,inf,2e6\nrating,0.05,900,inf,3e6\n";
  std::istringstream in(text);
  auto net = parse_case(in);
  REQUIRE(net.penalty_schedule.blocks_balance.size() == 2);
  CHECK(net.penalty_schedule.blocks_balance[0].price == 500.0);
  CHECK(std::isinf(net.penalty_schedule.blocks_balance[1].width));
  CHECK(net.penalty_schedule.blocks_rating[0].width == 0.05);
}

TEST_CASE("solution1 formatting is fixed point with 8 digits") {
  auto net = testnets::two_bus();
  auto x = OperatingPoint::zeros(net);
  x.p[0] = 0.5;  // 50 MW on the 100 MVA base
  std::ostringstream os;
  format_solution1(net, x, os);
  auto text = os.str();
  CHECK(text.find("--bus section\n1,1.00000000,0.00000000,0.00000000\n") != std::string::npos);
  CHECK(text.find("--generator section\n1,50.00000000,0.00000000\n") != std::string::npos);
}

TEST_CASE("solution1 round trip") {
  auto net = testnets::nine_bus();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_point(net, rng);
    std::ostringstream os;
    format_solution1(net, x, os);
    std::istringstream in(os.str());
    auto rr = read_solution1(in, net);
    REQUIRE(rr.ok());
    for (std::size_t i = 0; i < net.n_buses(); ++i) {
      CHECK(std::abs(rr.value->v[i] - x.v[i]) < 1e-8);
      CHECK(std::abs(rr.value->theta[i] - x.theta[i]) < 1e-8);
      CHECK(std::abs(rr.value->b_cs[i] - x.b_cs[i]) < 1e-8);
    }
    for (std::size_t g = 0; g < net.n_gens(); ++g) {
      CHECK(std::abs(rr.value->p[g] - x.p[g]) < 1e-8);
      CHECK(std::abs(rr.value->q[g] - x.q[g]) < 1e-8);
    }
  }
}

TEST_CASE("solution2 round trip preserves block order and delta") {
  auto net = testnets::nine_bus();
  auto cons = testnets::nine_bus_contingencies();
  std::mt19937 rng(23);
  std::vector<Solution2Block> blocks;
  for (const auto& c : cons) {
    Solution2Block b;
    b.label = c.label;
    b.point = random_point(net, rng);
    b.point.delta = -0.125;
    blocks.push_back(b);
  }
  std::ostringstream os;
  format_solution2(net, blocks, os);
  std::istringstream in(os.str());
  auto rr = read_solution2(in, net, cons);
  REQUIRE(rr.ok());
  REQUIRE(rr.value->size() == cons.size());
  for (std::size_t k = 0; k < cons.size(); ++k) {
    CHECK((*rr.value)[k].label == cons[k].label);
    CHECK(std::abs(*(*rr.value)[k].point.delta - -0.125) < 1e-8);
  }

  // order mismatch is a structured failure, not an exception
  std::swap(blocks[0], blocks[1]);
  std::ostringstream os2;
  format_solution2(net, blocks, os2);
  std::istringstream in2(os2.str());
  auto bad = read_solution2(in2, net, cons);
  CHECK_FALSE(bad.ok());
  CHECK(bad.error.find("order") != std::string::npos);
}

TEST_CASE("reader failures are structured worst-case triggers") {
  auto net = testnets::two_bus();
  auto missing = read_solution1_file("/nonexistent/solution1.txt", net);
  CHECK_FALSE(missing.ok());
  CHECK(missing.error.find("does not exist") != std::string::npos);

  // drop the last generator row
  auto x = OperatingPoint::zeros(net);
  std::ostringstream os;
  format_solution1(net, x, os);
  auto text = os.str();
  text.erase(text.rfind("2,"));
  std::istringstream in(text);
  auto short_file = read_solution1(in, net);
  CHECK_FALSE(short_file.ok());

  std::istringstream junk("--bus section\n1,abc,0,0\n");
  CHECK_FALSE(read_solution1(junk, net).ok());
}

TEST_CASE("contingency list parsing") {
  auto net = testnets::two_bus();
  std::istringstream in("G2_OUT,GEN,2\nL1_OUT,BRANCH,1\n");
  auto cons = parse_contingencies(in, net);
  REQUIRE(cons.size() == 2);
  CHECK(cons[0].label == "G2_OUT");
  CHECK(cons[0].kind == OutageKind::Generator);
  CHECK(cons[1].kind == OutageKind::Branch);

  std::istringstream bad("X,GEN,99\n");
  REQUIRE_THROWS_AS(parse_contingencies(bad, net), CaseParseError);

  std::istringstream empty("");
  CHECK(parse_contingencies(empty, net).empty());

  std::istringstream dup("A,GEN,1\nA,GEN,2\n");
  REQUIRE_THROWS_WITH(parse_contingencies(dup, net),
                      Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("atomic write leaves a complete file") {
  auto net = testnets::two_bus();
  auto x = OperatingPoint::zeros(net);
  auto dir = std::filesystem::temp_directory_path() / "scopf_caseio_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "solution1.txt";
  write_solution1(net, x, path);
  auto rr = read_solution1_file(path, net);
  CHECK(rr.ok());
  // rewrite over the existing file
  x.p[0] = 0.25;
  write_solution1(net, x, path);
  rr = read_solution1_file(path, net);
  REQUIRE(rr.ok());
  CHECK(std::abs(rr.value->p[0] - 0.25) < 1e-8);
  std::filesystem::remove_all(dir);
}
