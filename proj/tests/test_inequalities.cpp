#include <catch_amalgamated.hpp>

#include <spinlab/inequalities/hunt.hpp>
#include <spinlab/inequalities/inequalities.hpp>
#include <spinlab/inequalities/interacting.hpp>
#include <spinlab/inequalities/oracle.hpp>
#include <spinlab/inequalities/switching.hpp>

#include <cmath>

#include "support.hpp"

using namespace spinlab;
using namespace spinlab::inequalities;

TEST_CASE("correlation oracles") {
  auto ising = CorrelationOracle::ising(3);
  CHECK(ising(MultiIndex{1, 0, 0}) == 0);
  CHECK(ising(MultiIndex{1, 1, 1}) == 1);
  CHECK(ising(MultiIndex{2, 0, 4}) == 1);
  auto on3 = CorrelationOracle::on(2, 3);
  CHECK(on3(MultiIndex{2}) == Rational(1, 3));
  CHECK(on3(MultiIndex{1}) == 0);
  auto cp = CorrelationOracle::cpn(2, 2);
  CHECK(cp(MultiIndex{2}) == Rational(1, 3));
  CHECK_THROWS(on3(MultiIndex{1, 1}));
  auto tab = CorrelationOracle::tabulate(on3, 4);
  for (long k = 0; k <= 6; ++k) CHECK(tab(MultiIndex{k}) == on3(MultiIndex{k}));
  std::map<MultiIndex, Rational> values{{MultiIndex{0}, 1}, {MultiIndex{2}, Rational(1, 2)}};
  auto t = CorrelationOracle::table(values, ParityMap(1));
  CHECK(t(MultiIndex{2}) == Rational(1, 2));
  CHECK_THROWS_AS(t(MultiIndex{4}), std::out_of_range);
}

TEST_CASE("oracle values are nonnegative (GKS 1) on small grids") {
  for (long N : {1L, 2L, 3L}) {
    auto O = CorrelationOracle::on(3, N);
    auto C = CorrelationOracle::cpn(3, N);
    for (long a = 0; a <= 3; ++a)
      for (long b = 0; b <= 3; ++b)
        for (long c = 0; c <= 3; ++c) {
          CHECK(O(MultiIndex{a, b, c}) >= 0);
          CHECK(C(MultiIndex{a, b, c}) > 0);
        }
  }
}

TEST_CASE("CGKS 2 worked margins") {
  auto ising = CorrelationOracle::ising(2);
  CHECK(cgks2_margin(ising, {}, MultiIndex{2}, MultiIndex{4}, MultiIndex{}) == 0);
  auto on3 = CorrelationOracle::on(2, 3);
  CHECK(cgks2_margin(on3, {}, MultiIndex{2}, MultiIndex{2}, MultiIndex{}) == Rational(4, 45));
  CHECK(cgks2_margin(on3, {}, MultiIndex{2}, MultiIndex{1}, MultiIndex{}) == 0);
  CHECK(cgks2_margin(on3, {MultiIndex{1}}, MultiIndex{2}, MultiIndex{0}, MultiIndex{1}) == 0);
  auto on3p3 = CorrelationOracle::on(3, 3);
  CHECK(cgks2_margin(on3p3, {MultiIndex{1, 1, 1}}, MultiIndex{1, 1, 1}, MultiIndex{0, 0, 0}, MultiIndex{0}) == 0);
}

TEST_CASE("PCGKS 2 and the odd-padding counterexample") {
  auto on3 = CorrelationOracle::on(2, 3);
  CHECK(pcgks2_margin(on3, {}, MultiIndex{2}, MultiIndex{2}, MultiIndex{}, MultiIndex{2}) == Rational(4, 525));
  CHECK(pcgks2_margin(on3, {}, MultiIndex{2}, MultiIndex{2}, MultiIndex{}, MultiIndex{0}) ==
        cgks2_margin(on3, {}, MultiIndex{2}, MultiIndex{2}, MultiIndex{}));
  auto ising = CorrelationOracle::ising(2);
  CHECK_THROWS(pcgks2_margin(ising, {}, MultiIndex{1}, MultiIndex{1}, MultiIndex{}, MultiIndex{1}));
  CHECK(pcgks2_margin_unchecked(ising, {}, MultiIndex{1}, MultiIndex{1}, MultiIndex{}, MultiIndex{1}) == -1);
  // GG duplicated form on the same data: four products, value -2
  CHECK(pgg_value_unchecked(ising, {MultiIndex{1}, MultiIndex{1}}, {-1, -1}, MultiIndex{1}) == -2);
}

TEST_CASE("GG/PGG values") {
  auto ising = CorrelationOracle::ising(2);
  CHECK(gg_value(ising, {}, {}) == 1);
  auto on2 = CorrelationOracle::on(3, 2);
  const ExponentMatrix V{MultiIndex{1, 1, 0}, MultiIndex{1, 0, 1}};
  CHECK(gg_value(on2, V, {1, 1}) >= 0);
  CHECK(gg_value(on2, V, {-1, -1}) >= 0);
  auto on5 = CorrelationOracle::on(3, 5);
  CHECK(pgg_value(on5, {}, {}, MultiIndex{2, 0, 0}) == on5(MultiIndex{2, 0, 0}) * on5(MultiIndex{2, 0, 0}));
  CHECK_THROWS(pgg_value(on5, {}, {}, MultiIndex{1, 0, 0}));
}

TEST_CASE("hunt is empty for Ising/O(2) and replayable") {
  HuntConfig c;
  c.N_min = 1;
  c.N_max = 2;
  c.p = 3;
  c.count = 60;
  c.max_padding = 0;
  auto rep = hunt(c);
  CHECK(rep.violations.empty());
  CHECK(rep.evaluated + rep.skipped == rep.instances);
  c.count = 0;
  CHECK(hunt(c).instances == 0);
  HuntConfig big;
  big.N_min = big.N_max = 6;
  big.p = 3;
  big.count = 30;
  big.minus_probability = 0.8;
  auto r1 = hunt(big), r2 = hunt(big);
  REQUIRE(r1.violations.size() == r2.violations.size());
  for (std::size_t k = 0; k < r1.violations.size(); ++k) {
    CHECK(r1.violations[k].margin == r2.violations[k].margin);
    CHECK(replay(r1.violations[k].instance) == r1.violations[k].margin);
  }
  CHECK(hunt_instance(big, 7).V == hunt_instance(big, 7).V);
}

TEST_CASE("Ising switching verifier") {
  const auto rho = on_parity_map(3);
  // V = 0: feasible iff a and b are even
  auto r0 = ising_switch_verify(MultiIndex{2}, {MultiIndex{0, 0, 0}}, MultiIndex{0, 0, 0}, MultiIndex{0, 0, 0}, rho);
  CHECK(r0.verdict == SwitchVerdict::Verified);
  CHECK(r0.involution);
  CHECK(r0.lhs_total == r0.rhs_total);
  auto inf = ising_switch_verify(MultiIndex{1}, {MultiIndex{0, 0, 0}}, MultiIndex{1, 0, 0}, MultiIndex{0, 0, 0}, rho);
  CHECK(inf.verdict == SwitchVerdict::RhsZero);
  std::mt19937_64 rng(17);
  int feasible = 0;
  for (int t = 0; t < 200 && feasible < 30; ++t) {
    const std::size_t m = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    ExponentMatrix V;
    MultiIndex gamma(m);
    for (std::size_t i = 0; i < m; ++i) {
      V.push_back(MultiIndex{uniform_int(rng, 0, 1), uniform_int(rng, 0, 1), uniform_int(rng, 0, 1)});
      gamma.set(i, uniform_int(rng, 0, 3));
    }
    MultiIndex a{uniform_int(rng, 0, 1), uniform_int(rng, 0, 1), uniform_int(rng, 0, 1)};
    MultiIndex b{uniform_int(rng, 0, 1), uniform_int(rng, 0, 1), uniform_int(rng, 0, 1)};
    auto rep = ising_switch_verify(gamma, V, a, b, rho);
    CHECK(rep.verdict != SwitchVerdict::Failed);
    if (rep.verdict == SwitchVerdict::Verified) {
      ++feasible;
      CHECK(rep.involution);
      CHECK(rep.bijection);
      CHECK(rep.domination);
      CHECK(rep.lhs_total >= rep.rhs_total);
    }
  }
  CHECK(feasible > 0);
}

TEST_CASE("interacting Monte Carlo") {
  // two Ising spins, one bond with J = 1
  CouplingSpec c{{MultiIndex{1}}, {Rational(1)}};
  auto m = interacting_moment_mc(moments::Model::ON, 2, 1, c, MultiIndex{1}, 20000, 3);
  CHECK(std::abs(m.mean - std::tanh(1.0)) < 4 * m.stderr_ + 1e-12);
  auto g = gks2_mc_check(moments::Model::ON, 2, 1, c, MultiIndex{1}, MultiIndex{1}, 20000, 3);
  const double expect = 1 - std::tanh(1.0) * std::tanh(1.0);
  CHECK(std::abs(g.mean - expect) < 4 * g.stderr_ + 1e-12);
  // J = 0 matches exact zero-coupling moments
  CouplingSpec free{{MultiIndex{0}}, {Rational(0)}};
  auto f = interacting_moment_mc(moments::Model::ON, 2, 3, free, MultiIndex{2}, 100000, 4);
  CHECK(std::abs(f.mean - 1.0 / 3) < 4 * f.stderr_);
  CHECK_THROWS(interacting_moment_mc(moments::Model::ON, 2, 3, CouplingSpec{{MultiIndex{1}}, {Rational(-1)}},
                                     MultiIndex{2}, 10, 1));
}
