#include <catch_amalgamated.hpp>

#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include "support.hpp"

using namespace spinlab;
using namespace spinlab::kirchhoff;

namespace {
WeightedGraph tri() { return WeightedGraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}); }
WeightedGraph path3() { return WeightedGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}}); }
WeightedGraph k4() {
  WeightedGraph g(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) g.set_weight(i, j, 1);
  return g;
}
std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }
}  // namespace

TEST_CASE("worked Kirchhoff evaluations") {
  CHECK(kirchhoff_spanning(tri(), ones(3)) == 3);
  CHECK(kirchhoff_matrix_tree(tri(), ones(3)).value == 3);
  CHECK(kirchhoff_spanning(path3(), {2, 3}) == 6);
  CHECK(kirchhoff_matrix_tree(path3(), {2, 3}).value == 6);
  CHECK(kirchhoff_spanning(k4(), ones(6)) == 16);
  CHECK(kirchhoff_matrix_tree(k4(), ones(6)).value == 16);
  CHECK(spanning_tree_count(k4()) == 16);
}

TEST_CASE("disconnected graphs are flagged") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 1);
  g.set_weight(2, 3, 1);
  CHECK_THROWS_AS(kirchhoff_spanning(g, ones(2)), DisconnectedGraphError);
  auto mt = kirchhoff_matrix_tree(g, ones(2));
  CHECK_FALSE(mt.connected);
  CHECK(mt.value == 0);
  CHECK_THROWS(kirchhoff_spanning(tri(), {1, 0, 1}));
  CHECK_THROWS(kirchhoff_spanning(tri(), {1, 1}));
}

TEST_CASE("symbolic expansion") {
  CHECK(kirchhoff_symbolic(tri()).to_string() == "x1*x2 + x1*x3 + x2*x3");
  CHECK(kirchhoff_symbolic(WeightedGraph::from_edges(2, {{0, 1, 1}})).to_string() == "x1");
  const auto K4 = kirchhoff_symbolic(k4());
  CHECK(K4.term_count() == 16);
  CHECK(K4.is_multiaffine());
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const auto g = support::random_connected(rng, static_cast<std::size_t>(uniform_int(rng, 2, 5)));
    const auto x = support::random_point(rng, g.edge_count());
    const auto K = kirchhoff_symbolic(g);
    CHECK(K.evaluate(x) == kirchhoff_matrix_tree(g, x).value);
    CHECK(K.evaluate(x) == kirchhoff_spanning(g, x));
  }
}

TEST_CASE("Rayleigh difference") {
  CHECK(rayleigh_check(tri(), ones(3), 0, 1) == 1);
  CHECK(rayleigh_check(path3(), {2, 5}, 0, 1) == 0);
  // e = f gives (d_e K)^2
  CHECK(rayleigh_check(tri(), ones(3), 0, 0) == 4);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto g = support::random_connected(rng, static_cast<std::size_t>(uniform_int(rng, 3, 6)));
    const auto x = support::random_point(rng, g.edge_count());
    const auto E = static_cast<long>(g.edge_count());
    const auto e = static_cast<std::size_t>(uniform_int(rng, 0, E - 1));
    const auto f = static_cast<std::size_t>(uniform_int(rng, 0, E - 1));
    CHECK(rayleigh_check(g, x, e, f) >= 0);
  }
  CHECK_THROWS(rayleigh_check(tri(), ones(3), 0, 5));
}

TEST_CASE("ultramodularity margin") {
  auto r = ultramod_check(tri(), ones(3), {1, 0, 0}, {0, 1, 0});
  CHECK(r.margin == -1);
  CHECK(r.holds);
  CHECK(ultramod_check(tri(), ones(3), {1, 2, 0}, {0, 0, 0}).margin == 0);
  CHECK_THROWS(ultramod_check(tri(), {0, 1, 1}, {1, 0, 0}, {0, 1, 0}));
}

TEST_CASE("determinantal representation reproduces K") {
  auto one = determinantal_rep(WeightedGraph::from_edges(2, {{0, 1, 1}}));
  CHECK(one.q() == 1);
  CHECK(one.matrix(0)(0, 0) == 1);
  auto t = determinantal_rep(tri());
  CHECK(t.n() == 3);
  CHECK(t.q() == 2);
  for (const auto& A : t.matrices()) CHECK(ldlt_certify(A).rank == 1);
  CHECK(stabledet::eval_P(t, ones(3)) == 3);
  CHECK(stabledet::symbolic_P(determinantal_rep(path3())).to_string() == "x1*x2");
  std::mt19937_64 rng(6);
  for (int k = 0; k < 30; ++k) {
    const auto g = support::random_connected(rng, static_cast<std::size_t>(uniform_int(rng, 2, 6)));
    const auto x = support::random_point(rng, g.edge_count());
    CHECK(stabledet::eval_P(determinantal_rep(g), x) == kirchhoff_matrix_tree(g, x).value);
  }
}
