#pragma once

// Kirchhoff polynomial K(x) = sum over spanning trees T of prod_{e in T} x_e.
// Vectors over edges follow WeightedGraph::edges() (lexicographic by endpoints).

#include <spinlab/core/polynomial.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/linalg/rational_matrix.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::kirchhoff {

inline constexpr std::uint64_t max_enumerated_trees = 1'000'000;
inline constexpr std::size_t max_symbolic_edges = 12;

class DisconnectedGraphError : public std::invalid_argument {
 public:
  DisconnectedGraphError() : std::invalid_argument("graph is disconnected") {}
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline void check_point(const WeightedGraph& g, const std::vector<Rational>& x, bool strict) {
  if (x.size() != g.edge_count())
    throw std::invalid_argument("edge vector has length " + std::to_string(x.size()) + ", graph has " +
                                std::to_string(g.edge_count()) + " edges");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < 0 || (strict && x[k] == 0))
      throw std::invalid_argument("edge value " + std::to_string(k + 1) + " must be " +
                                  (strict ? "strictly positive" : "nonnegative"));
  }
}

/// Visits each spanning tree once as a bitmask over edges.
template <class F>
void for_each_spanning_tree(const WeightedGraph& g, F&& visit) {
  const auto es = g.edges();
  const std::size_t p = g.vertex_count();
  if (es.size() > 63) throw std::invalid_argument("spanning-tree enumeration limited to 63 edges");
  std::uint64_t count = 0;

  // Whether the chosen edges plus all edges from `from` on can still connect.
  auto connectable = [&](std::uint64_t chosen, std::size_t from) {
    UnionFind uf(p);
    std::size_t comps = p;
    for (std::size_t k = 0; k < es.size(); ++k)
      if ((k >= from || ((chosen >> k) & 1U)) && uf.unite(es[k].u, es[k].v)) --comps;
    return comps == 1;
  };

  auto rec = [&](auto&& self, std::size_t k, std::uint64_t chosen, std::size_t picked) -> void {
    if (picked == p - 1) {
      if (++count > max_enumerated_trees)
        throw std::length_error("more than 10^6 spanning trees; use the matrix-tree evaluator");
      visit(chosen);
      return;
    }
    if (k == es.size()) return;
    // include es[k] if it joins two components of the chosen forest
    UnionFind uf(p);
    for (std::size_t t = 0; t < k; ++t)
      if ((chosen >> t) & 1U) uf.unite(es[t].u, es[t].v);
    if (uf.find(es[k].u) != uf.find(es[k].v)) self(self, k + 1, chosen | (1ULL << k), picked + 1);
    if (connectable(chosen, k + 1)) self(self, k + 1, chosen, picked);
  };
  if (!g.is_connected()) throw DisconnectedGraphError();
  rec(rec, 0, 0, 0);
}

}  // namespace detail

/// Spanning-tree enumeration evaluator.
inline Rational kirchhoff_spanning(const WeightedGraph& g, const std::vector<Rational>& x) {
  detail::check_point(g, x, true);
  Rational total = 0;
  detail::for_each_spanning_tree(g, [&](std::uint64_t mask) {
    Rational term = 1;
    for (std::size_t k = 0; k < x.size(); ++k)
      if ((mask >> k) & 1U) term *= x[k];
    total += term;
  });
  return total;
}

inline std::uint64_t spanning_tree_count(const WeightedGraph& g) {
  std::uint64_t c = 0;
  detail::for_each_spanning_tree(g, [&](std::uint64_t) { ++c; });
  return c;
}

struct MatrixTreeResult {
  Rational value;
  bool connected = true;
};

/// Reduced weighted Laplacian (vertex 1 grounded).
inline RationalMatrix reduced_laplacian(const WeightedGraph& g, const std::vector<Rational>& x) {
  detail::check_point(g, x, false);
  const std::size_t p = g.vertex_count();
  RationalMatrix L(p - 1, p - 1);
  const auto es = g.edges();
  for (std::size_t k = 0; k < es.size(); ++k) {
    const auto u = es[k].u, v = es[k].v;
    if (u > 0) L(u - 1, u - 1) += x[k];
    if (v > 0) L(v - 1, v - 1) += x[k];
    if (u > 0 && v > 0) {
      L(u - 1, v - 1) -= x[k];
      L(v - 1, u - 1) -= x[k];
    }
  }
  return L;
}

/// Matrix-tree evaluator. x may contain zeros (deletion); a disconnected
/// support yields value 0 with connected = false.
inline MatrixTreeResult kirchhoff_matrix_tree(const WeightedGraph& g, const std::vector<Rational>& x) {
  MatrixTreeResult r;
  r.connected = g.is_connected();
  r.value = r.connected ? determinant(reduced_laplacian(g, x)) : Rational(0);
  return r;
}

/// K with unit coefficients, variables x1..xE in canonical edge order.
inline Polynomial kirchhoff_symbolic(const WeightedGraph& g) {
  const std::size_t E = g.edge_count();
  if (E > max_symbolic_edges)
    throw std::invalid_argument("symbolic Kirchhoff polynomial limited to " + std::to_string(max_symbolic_edges) +
                                " edges (graph has " + std::to_string(E) + ")");
  Polynomial K(E);
  detail::for_each_spanning_tree(g, [&](std::uint64_t mask) {
    Polynomial::Exponent e(E, 0);
    for (std::size_t k = 0; k < E; ++k) e[k] = (mask >> k) & 1U;
    K.add_term(e, Rational(1));
  });
  return K;
}

/// Edge weights of g as a point (the K(m) of the large-power theorems).
inline std::vector<Rational> weights_as_point(const WeightedGraph& g) {
  std::vector<Rational> x;
  for (const auto& e : g.edges()) x.emplace_back(e.weight);
  return x;
}

/// Delta_{e,f}(K)(x) = d_eK d_fK - K d_e d_fK. K is multiaffine, so with
/// K = c00 + c10 x_e + c01 x_f + c11 x_e x_f, Delta = c10 c01 - c00 c11.
/// For e = f this is (d_eK)^2.
inline Rational rayleigh_check(const WeightedGraph& g, const std::vector<Rational>& x, std::size_t e,
                               std::size_t f) {
  detail::check_point(g, x, true);
  if (!g.is_connected()) throw DisconnectedGraphError();
  const std::size_t E = x.size();
  if (e >= E || f >= E) throw std::out_of_range("edge index out of range");
  auto K_at = [&](const Rational& xe, const Rational& xf) {
    auto y = x;
    y[e] = xe;
    y[f] = xf;
    return kirchhoff_matrix_tree(g, y).value;
  };
  if (e == f) {
    auto y1 = x, y0 = x;
    y1[e] = 1;
    y0[e] = 0;
    Rational d = kirchhoff_matrix_tree(g, y1).value - kirchhoff_matrix_tree(g, y0).value;
    return d * d;
  }
  const Rational K00 = K_at(0, 0), K10 = K_at(1, 0), K01 = K_at(0, 1), K11 = K_at(1, 1);
  const Rational c10 = K10 - K00, c01 = K01 - K00, c11 = K11 - K10 - K01 + K00;
  return c10 * c01 - K00 * c11;
}

struct UltramodResult {
  Rational margin;
  bool holds = false;
};

/// K(u+a+b) K(u) - K(u+a) K(u+b); holds iff <= 0.
inline UltramodResult ultramod_check(const WeightedGraph& g, const std::vector<Rational>& u,
                                     const std::vector<Rational>& a, const std::vector<Rational>& b) {
  detail::check_point(g, u, true);
  detail::check_point(g, a, false);
  detail::check_point(g, b, false);
  if (!g.is_connected()) throw DisconnectedGraphError();
  auto add = [](std::vector<Rational> x, const std::vector<Rational>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += y[k];
    return x;
  };
  auto K = [&](const std::vector<Rational>& x) { return kirchhoff_matrix_tree(g, x).value; };
  UltramodResult r;
  r.margin = K(add(add(u, a), b)) * K(u) - K(add(u, a)) * K(add(u, b));
  r.holds = r.margin <= 0;
  return r;
}

/// A_e = b_e b_e^T with b_e the incidence vector of e, vertex 1 grounded, so
/// det(sum x_e A_e) = K(x) by the matrix-tree theorem.
inline stabledet::PsdEnsemble determinantal_rep(const WeightedGraph& g) {
  if (!g.is_connected()) throw DisconnectedGraphError();
  const std::size_t q = g.vertex_count() - 1;
  std::vector<RationalMatrix> mats;
  for (const auto& e : g.edges()) {
    std::vector<Rational> b(q, Rational(0));
    if (e.u > 0) b[e.u - 1] = 1;
    if (e.v > 0) b[e.v - 1] = -1;
    RationalMatrix A(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) A(i, j) = b[i] * b[j];
    mats.push_back(std::move(A));
  }
  return stabledet::PsdEnsemble(std::move(mats));
}

}  // namespace spinlab::kirchhoff
