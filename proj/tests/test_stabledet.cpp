#include <catch_amalgamated.hpp>

#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/stabledet/battery.hpp>
#include <spinlab/stabledet/ensemble.hpp>
#include <spinlab/stabledet/hirota.hpp>
#include <spinlab/stabledet/pgg.hpp>
#include <spinlab/stabledet/wick.hpp>

#include <cmath>

#include "oracles/brute.hpp"
#include "support.hpp"

using namespace spinlab;
using namespace spinlab::stabledet;

namespace {
PsdEnsemble scalar_one() { return PsdEnsemble({RationalMatrix::from_rows({{1}})}); }

PggInstance worked(int e1, int e2) {
  PggInstance in;
  in.V = {MultiIndex{1}, MultiIndex{1}};
  in.eps = {e1, e2};
  in.u = MultiIndex{2};
  in.r = 2;
  in.rho = ParityMap(1);
  return in;
}
}  // namespace

TEST_CASE("ensemble validation and evaluation") {
  CHECK(eval_P(scalar_one(), {5}) == 5);
  CHECK_THROWS(PsdEnsemble({RationalMatrix::from_rows({{-1}})}));
  CHECK_THROWS(PsdEnsemble({RationalMatrix::from_rows({{1, 2}, {0, 1}})}));
  CHECK_THROWS(PsdEnsemble({RationalMatrix::from_rows({{1, 0}, {0, 0}})}));  // sum not PD
  auto ens = PsdEnsemble({RationalMatrix::from_rows({{1, 0}, {0, 0}}), RationalMatrix::from_rows({{0, 0}, {0, 1}})});
  CHECK(eval_P(ens, {0, 3}) == 0);
  CHECK(eval_P(ens, {2, 3}) == 6);
  CHECK_THROWS(eval_P(ens, {1}));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto e = support::random_ensemble(rng, 3, 3);
    auto x = support::random_point(rng, 3);
    CHECK(symbolic_P(e).evaluate(x) == eval_P(e, x));
  }
}

TEST_CASE("worked theta values") {
  auto t = pgg_theta(scalar_one(), worked(-1, -1));
  REQUIRE(t.exact);
  CHECK(*t.exact == Rational(1, 36));
  CHECK(t.verdict == Verdict::CertifiedNonnegative);
  auto z = pgg_theta(scalar_one(), worked(1, -1));
  CHECK(z.exactly_zero());
  CHECK(z.verdict == Verdict::CertifiedNonnegative);
  PggInstance empty;
  empty.u = MultiIndex{3};
  empty.r = 3;
  empty.rho = ParityMap(1);
  auto e = pgg_theta(scalar_one(), empty);
  // P(u)^{-r/2} squared = 3^{-3}, irrational-free at odd r because both factors coincide
  CHECK(e.enclosure.contains(Rational(1, 27)));
  CHECK(e.verdict == Verdict::CertifiedNonnegative);
}

TEST_CASE("theta hypotheses are checked") {
  auto in = worked(-1, -1);
  in.u = MultiIndex{0};
  CHECK_THROWS_AS(pgg_theta(scalar_one(), in), std::invalid_argument);
  in = worked(-1, -1);
  in.rho = ParityMap::from_rows({{1}}, 1);
  in.V = {MultiIndex{1}, MultiIndex{2}};  // 1_m V = 3 odd
  CHECK_THROWS_AS(pgg_theta(scalar_one(), in), std::invalid_argument);
  in = worked(-1, -1);
  in.eps = {1};
  CHECK_THROWS_AS(pgg_theta(scalar_one(), in), std::invalid_argument);
}

TEST_CASE("certified theta agrees with a floating-point evaluation") {
  BatteryConfig c;
  c.q = 3;
  c.n = 3;
  c.m = 5;
  for (long r : {1L, 2L, 3L}) {
    c.r = r;
    for (std::uint64_t k = 0; k < 15; ++k) {
      auto gen = battery_instance(c, k);
      auto t = pgg_theta(gen.ensemble, gen.instance);
      const double ref = oracle::pgg_theta_double(gen.ensemble, gen.instance);
      CHECK(std::abs(t.enclosure.midpoint_double() - ref) <= 1e-9 * (1 + std::abs(ref)));
      CHECK(t.verdict != Verdict::CertifiedNegative);
    }
  }
}

TEST_CASE("precision cap from the environment") {
  CHECK(precision_cap_from_env(777) >= 2);
}

TEST_CASE("battery is deterministic and independent of the worker count") {
  BatteryConfig c;
  c.count = 12;
  c.seed = 5;
  auto a = random_pgg_battery(c);
  c.jobs = 3;
  auto b = random_pgg_battery(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].hash == b.records[k].hash);
    CHECK(a.records[k].index == b.records[k].index);
    CHECK(a.records[k].theta_mid == b.records[k].theta_mid);
  }
  CHECK(a.falsifications == 0);
  c.count = 0;
  auto e = random_pgg_battery(c);
  CHECK(e.instances == 0);
  CHECK(e.records.empty());
  BatteryConfig kc;
  kc.kind = EnsembleKind::Kirchhoff;
  kc.q = 3;
  kc.n = 4;
  kc.r = 2;
  kc.count = 10;
  auto k = random_pgg_battery(kc);
  CHECK(k.falsifications == 0);
  CHECK(k.inconclusive == 0);
  for (const auto& rec : k.records) CHECK(rec.exact.has_value());
}

TEST_CASE("lemma integral worked cases") {
  CHECK(lemma_check(scalar_one(), {1}, MultiIndex{1}, 1) == 0);
  CHECK(lemma_check(scalar_one(), {1}, MultiIndex{2}, 1) == 1);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    auto e = support::random_ensemble(rng, 2, 3);
    auto v = support::random_point(rng, 3);
    for (long r = 1; r <= 3; ++r) CHECK(lemma_check(e, v, MultiIndex(3), r) == pow(eval_P(e, v), -r));
  }
  CHECK_THROWS(lemma_check(scalar_one(), {1}, MultiIndex{5}, 1));
}

TEST_CASE("lemma integral and Hirota carrier are two routes to the same number") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 25; ++t) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    auto e = support::random_ensemble(rng, 2, n);
    auto v = support::random_point(rng, n);
    MultiIndex a(n);
    for (int s = 0; s < 4; ++s) a.add_at(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1)), 1);
    const long r = uniform_int(rng, 1, 3);
    const Rational I = lemma_check(e, v, a, r);
    const Rational S = hirota_probe(e, a, v, Rational(r, 2));
    CHECK(I == S / pow(eval_P(e, v), r + static_cast<long>(a.length())));
    CHECK(I >= 0);
  }
}

TEST_CASE("theta_G against the literal (g, h) average") {
  CHECK(theta_G(3, {}, {}, 0) == 1);
  CHECK(theta_G(2, {0, 0, 0}, {1, 1, 1}, 0b111) == 8);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 60; ++t) {
    const auto L = static_cast<std::size_t>(uniform_int(rng, 0, 4));
    const auto m = static_cast<std::size_t>(uniform_int(rng, 0, 6));
    std::vector<std::uint64_t> rows(m);
    std::vector<int> eps(m);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      rows[i] = static_cast<std::uint64_t>(uniform_int(rng, 0, (1L << L) - 1));
      total ^= rows[i];
    }
    if (m) rows[m - 1] = total;  // rows sum to zero
    for (auto& e : eps) e = coin(rng) ? 1 : -1;
    const auto I = static_cast<std::uint64_t>(uniform_int(rng, 0, (1L << m) - 1));
    const Rational v = theta_G(L, rows, eps, I);
    CHECK(v == oracle::theta_G(L, rows, eps, I));
    CHECK(v >= 0);
  }
}

TEST_CASE("theta_C_gamma") {
  auto e = PsdEnsemble({RationalMatrix::from_rows({{2, 1}, {1, 1}}), RationalMatrix::from_rows({{1, 0}, {0, 3}})});
  const MultiIndex u{1, 2};
  const ExponentMatrix V{MultiIndex{1, 0}, MultiIndex{1, 2}};
  // I = [m], gamma = 0: P(u + 1_m V / 2)^{-r}
  CHECK(theta_C_gamma(e, u, V, 0b11, MultiIndex(2), 2) == pow(eval_P(e, {2, 3}), -2));
  std::mt19937_64 rng(15);
  for (int t = 0; t < 30; ++t) {
    auto ens = support::random_ensemble(rng, 2, 2);
    MultiIndex uu{uniform_int(rng, 1, 3), uniform_int(rng, 1, 3)};
    ExponentMatrix VV{MultiIndex{uniform_int(rng, 0, 2), uniform_int(rng, 0, 2)},
                      MultiIndex{uniform_int(rng, 0, 2), uniform_int(rng, 0, 2)}};
    const auto I = static_cast<std::uint64_t>(uniform_int(rng, 0, 3));
    MultiIndex gamma{uniform_int(rng, 0, 1), uniform_int(rng, 0, 1)};
    CHECK(theta_C_gamma(ens, uu, VV, I, gamma, uniform_int(rng, 1, 3)) >= 0);
  }
}

TEST_CASE("Hirota probe") {
  CHECK(hirota_probe(scalar_one(), MultiIndex{2}, {1}, Rational(1)) == 2);
  CHECK(hirota_probe(scalar_one(), MultiIndex{0}, {3}, Rational(1, 2)) == 1);
  CHECK_THROWS(hirota_probe(scalar_one(), MultiIndex{3}, {1}, Rational(1)));
  CHECK_THROWS(hirota_probe(scalar_one(), MultiIndex{2}, {0}, Rational(1)));
  // mixed |a| = 2 on a Kirchhoff ensemble is 2 eta times the Rayleigh difference
  std::mt19937_64 rng(16);
  for (int t = 0; t < 20; ++t) {
    const auto g = support::random_connected(rng, static_cast<std::size_t>(uniform_int(rng, 3, 5)));
    const auto ens = kirchhoff::determinantal_rep(g);
    const auto x = support::random_point(rng, g.edge_count());
    const auto E = static_cast<long>(g.edge_count());
    const auto e = static_cast<std::size_t>(uniform_int(rng, 0, E - 1));
    auto f = static_cast<std::size_t>(uniform_int(rng, 0, E - 2));
    if (f >= e) ++f;
    MultiIndex a(g.edge_count());
    a.set(e, 1);
    a.set(f, 1);
    const Rational eta(uniform_int(rng, 1, 5), uniform_int(rng, 1, 3));
    CHECK(hirota_probe(ens, a, x, eta) == 2 * eta * kirchhoff::rayleigh_check(g, x, e, f));
  }
}
