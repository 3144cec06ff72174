#pragma once

// Vertex-elimination engine for zero-coupling sphere moments.
//
// The state is a polynomial in formal inner-product variables between the
// vertices not yet integrated out. Integrating out a vertex v replaces the
// factors that touch v by the aggregated pairing (real case) or
// permutation (complex case) sum, divided by the sphere normalization.
//
// Real case, classes w with k_w half-edges toward v, d = sum k_w:
//   E[prod_h (sigma . x_h)] = (N(N+2)...(N+d-2))^{-1} sum_{matchings} prod (x_a . x_b)
//   and a count matrix c (c_ww internal pairs, c_ww' cross pairs) occurs
//   prod_w k_w! / (prod_{w<w'} c_ww'! * prod_w 2^{c_ww} c_ww!) times.
// Complex case, out_w copies of z_v^* z_w and in_w copies of z_w^* z_v:
//   E[prod (z^* x_h) prod (y_h^* z)] = (N(N+1)...(N+d-1))^{-1} sum_{pi in S_d} prod (y_pi(h)^* x_h)
//   and a contingency table c (rows: in-classes, columns: out-classes) occurs
//   prod out_w! prod in_w! / prod c! times.

#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::moments {

enum class Model { ON, CPN };

inline const char* model_name(Model m) { return m == Model::ON ? "ON" : "CPN"; }

struct EliminationOptions {
  /// Refuse a vertex whose incident multiplicity exceeds this (exact mode).
  long max_multiplicity = 16;
  /// Explicit vertex order (first p-1 entries are used); default is
  /// minimum current degree, ties broken by vertex index.
  std::optional<std::vector<std::size_t>> order;
};

class MultiplicityLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Monomial = std::vector<std::uint32_t>;
using StatePoly = std::map<Monomial, Rational>;

/// One aggregated contraction outcome: exponent increments on variables and
/// the integer number of matchings/permutations producing it.
struct Contraction {
  std::vector<std::pair<std::size_t, std::uint32_t>> increments;
  BigInt count;
};

/// N(N+step)(N+2 step)... with `factors` factors.
inline BigInt rising(long N, long step, long factors) {
  BigInt r = 1;
  for (long k = 0; k < factors; ++k) r *= BigInt(N + step * k);
  return r;
}

/// Real case: enumerate count matrices for classes `neighbors` with
/// multiplicities `k`, emitting increments on pair variables.
inline std::vector<Contraction> real_contractions(const std::vector<std::size_t>& neighbors,
                                                  const std::vector<std::uint32_t>& k, std::size_t p) {
  const std::size_t s = neighbors.size();
  std::vector<std::pair<std::size_t, std::size_t>> cross;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b) cross.emplace_back(a, b);

  BigInt numerator = 1;
  for (auto kw : k) numerator *= factorial(kw);

  std::vector<Contraction> out;
  std::vector<std::uint32_t> rem(k);
  std::vector<std::uint32_t> c(cross.size(), 0);

  auto finish = [&]() {
    BigInt denom = 1;
    for (std::size_t a = 0; a < s; ++a) {
      if (rem[a] % 2 != 0) return;
      const std::uint32_t internal = rem[a] / 2;
      BigInt two_pow;
      mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, internal);
      denom *= two_pow * factorial(internal);
    }
    Contraction con;
    for (std::size_t t = 0; t < cross.size(); ++t) {
      if (c[t] == 0) continue;
      denom *= factorial(c[t]);
      con.increments.emplace_back(pair_index(neighbors[cross[t].first], neighbors[cross[t].second], p), c[t]);
    }
    con.count = numerator / denom;
    out.push_back(std::move(con));
  };

  auto recurse = [&](auto&& self, std::size_t t) -> void {
    if (t == cross.size()) {
      finish();
      return;
    }
    auto [a, b] = cross[t];
    const std::uint32_t cap = std::min(rem[a], rem[b]);
    for (std::uint32_t v = 0; v <= cap; ++v) {
      c[t] = v;
      rem[a] -= v;
      rem[b] -= v;
      self(self, t + 1);
      rem[a] += v;
      rem[b] += v;
    }
    c[t] = 0;
  };
  recurse(recurse, 0);
  return out;
}

/// Complex case: contingency tables with row sums `in` (classes `in_cls`)
/// and column sums `out` (classes `out_cls`). Variable index of h_{ab} is a*p + b.
inline std::vector<Contraction> complex_contractions(const std::vector<std::size_t>& in_cls,
                                                     const std::vector<std::uint32_t>& in,
                                                     const std::vector<std::size_t>& out_cls,
                                                     const std::vector<std::uint32_t>& outs, std::size_t p) {
  const std::size_t R = in_cls.size();
  const std::size_t C = out_cls.size();
  BigInt numerator = 1;
  for (auto v : in) numerator *= factorial(v);
  for (auto v : outs) numerator *= factorial(v);

  std::vector<Contraction> result;
  std::vector<std::uint32_t> row_rem(in), col_rem(outs);
  std::vector<std::uint32_t> cell(R * C, 0);

  auto finish = [&]() {
    for (auto v : col_rem)
      if (v != 0) return;
    BigInt denom = 1;
    Contraction con;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) {
        const auto v = cell[i * C + j];
        if (v == 0) continue;
        denom *= factorial(v);
        if (in_cls[i] != out_cls[j]) con.increments.emplace_back(in_cls[i] * p + out_cls[j], v);
      }
    con.count = numerator / denom;
    result.push_back(std::move(con));
  };

  auto recurse = [&](auto&& self, std::size_t idx) -> void {
    if (idx == R * C) {
      finish();
      return;
    }
    const std::size_t i = idx / C;
    const std::size_t j = idx % C;
    if (j == C - 1) {
      // Last cell of a row absorbs the remainder.
      const std::uint32_t v = row_rem[i];
      if (v > col_rem[j]) return;
      cell[idx] = v;
      row_rem[i] -= v;
      col_rem[j] -= v;
      self(self, idx + 1);
      row_rem[i] += v;
      col_rem[j] += v;
      cell[idx] = 0;
      return;
    }
    const std::uint32_t cap = std::min(row_rem[i], col_rem[j]);
    for (std::uint32_t v = 0; v <= cap; ++v) {
      cell[idx] = v;
      row_rem[i] -= v;
      col_rem[j] -= v;
      self(self, idx + 1);
      row_rem[i] += v;
      col_rem[j] += v;
    }
    cell[idx] = 0;
  };
  if (R == 0 && C == 0) {
    Contraction con;
    con.count = 1;
    result.push_back(std::move(con));
    return result;
  }
  recurse(recurse, 0);
  return result;
}

inline void validate_order(const std::vector<std::size_t>& order, std::size_t p) {
  if (order.size() + 1 < p) throw std::invalid_argument("elimination order must name at least p-1 vertices");
  std::vector<bool> seen(p, false);
  for (auto v : order) {
    if (v >= p) throw std::invalid_argument("elimination order names a vertex out of range");
    if (seen[v]) throw std::invalid_argument("elimination order repeats a vertex");
    seen[v] = true;
  }
}

}  // namespace detail

struct EliminationOutcome {
  Rational value;
  std::vector<std::size_t> order;
};

/// Exact <prod_{i<j} (sigma_i . sigma_j)^{m_ij}> over (S^{N-1})^p.
inline EliminationOutcome eliminate_on(const WeightedGraph& g, long N, const EliminationOptions& opt = {}) {
  using namespace detail;
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const std::size_t p = g.vertex_count();
  if (!g.is_even()) return {Rational(0), {}};
  if (opt.order) validate_order(*opt.order, p);

  const std::size_t nvars = pair_count(p);
  StatePoly state;
  {
    Monomial m(nvars, 0);
    auto a = g.pair_exponents();
    for (std::size_t k = 0; k < nvars; ++k) m[k] = static_cast<std::uint32_t>(a[k]);
    state.emplace(std::move(m), Rational(1));
  }
  std::vector<bool> alive(p, true);
  std::vector<std::size_t> order;

  for (std::size_t step = 0; step + 1 < p; ++step) {
    std::size_t v = 0;
    if (opt.order) {
      v = (*opt.order)[step];
    } else {
      long best = -1;
      for (std::size_t c = 0; c < p; ++c) {
        if (!alive[c]) continue;
        long deg = 0;
        for (const auto& [mono, coeff] : state) {
          long d = 0;
          for (std::size_t w = 0; w < p; ++w)
            if (w != c && alive[w]) d += mono[pair_index(c, w, p)];
          deg = std::max(deg, d);
        }
        if (best < 0 || deg < best) {
          best = deg;
          v = c;
        }
      }
    }
    order.push_back(v);

    std::map<std::vector<std::uint32_t>, std::vector<Contraction>> cache;
    StatePoly next;
    for (const auto& [mono, coeff] : state) {
      std::vector<std::size_t> nbrs;
      std::vector<std::uint32_t> k;
      std::vector<std::uint32_t> key(p, 0);
      long d = 0;
      for (std::size_t w = 0; w < p; ++w) {
        if (w == v || !alive[w]) continue;
        const auto e = mono[pair_index(v, w, p)];
        key[w] = e;
        if (e == 0) continue;
        nbrs.push_back(w);
        k.push_back(e);
        d += e;
      }
      if (d % 2 != 0) continue;
      if (d > opt.max_multiplicity)
        throw MultiplicityLimitError("vertex " + std::to_string(v + 1) + " has incident multiplicity " +
                                     std::to_string(d) + " > " + std::to_string(opt.max_multiplicity) +
                                     " (exact mode limit; use Monte Carlo)");
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, real_contractions(nbrs, k, p)).first;

      Monomial base = mono;
      for (auto w : nbrs) base[pair_index(v, w, p)] = 0;
      const Rational scale = coeff / Rational(rising(N, 2, d / 2));
      for (const auto& con : it->second) {
        Monomial m2 = base;
        for (auto [var, inc] : con.increments) m2[var] += inc;
        Rational add = scale * Rational(con.count);
        auto [pos, inserted] = next.try_emplace(std::move(m2), add);
        if (!inserted) pos->second += add;
      }
    }
    for (auto itn = next.begin(); itn != next.end();) {
      if (itn->second == 0) itn = next.erase(itn);
      else ++itn;
    }
    state = std::move(next);
    alive[v] = false;
  }

  Rational value = 0;
  if (!state.empty()) {
    if (state.size() != 1) throw std::logic_error("elimination left a non-constant state");
    value = state.begin()->second;
  }
  return {value, order};
}

/// Exact <prod_{i<j} |<z_i, z_j>|^{2 m_ij}> over complex unit spheres in C^N.
inline EliminationOutcome eliminate_cpn(const WeightedGraph& g, long N, const EliminationOptions& opt = {}) {
  using namespace detail;
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const std::size_t p = g.vertex_count();
  if (opt.order) validate_order(*opt.order, p);
  const std::size_t nvars = p * p;
  StatePoly state;
  {
    Monomial m(nvars, 0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        if (i != j) m[i * p + j] = static_cast<std::uint32_t>(g.weight(i, j));
    state.emplace(std::move(m), Rational(1));
  }
  std::vector<bool> alive(p, true);
  std::vector<std::size_t> order;

  for (std::size_t step = 0; step + 1 < p; ++step) {
    std::size_t v = 0;
    if (opt.order) {
      v = (*opt.order)[step];
    } else {
      long best = -1;
      for (std::size_t c = 0; c < p; ++c) {
        if (!alive[c]) continue;
        long deg = 0;
        for (const auto& [mono, coeff] : state) {
          long d = 0;
          for (std::size_t w = 0; w < p; ++w)
            if (w != c && alive[w]) d += mono[c * p + w];
          deg = std::max(deg, d);
        }
        if (best < 0 || deg < best) {
          best = deg;
          v = c;
        }
      }
    }
    order.push_back(v);

    std::map<std::vector<std::uint32_t>, std::vector<Contraction>> cache;
    StatePoly next;
    for (const auto& [mono, coeff] : state) {
      // out-slots: h_{vw} = z_v^* z_w ; in-slots: h_{wv} = z_w^* z_v
      std::vector<std::size_t> out_cls, in_cls;
      std::vector<std::uint32_t> outs, ins;
      std::vector<std::uint32_t> key(2 * p, 0);
      long d_out = 0, d_in = 0;
      for (std::size_t w = 0; w < p; ++w) {
        if (w == v || !alive[w]) continue;
        const auto eo = mono[v * p + w];
        const auto ei = mono[w * p + v];
        key[w] = eo;
        key[p + w] = ei;
        if (eo) {
          out_cls.push_back(w);
          outs.push_back(eo);
          d_out += eo;
        }
        if (ei) {
          in_cls.push_back(w);
          ins.push_back(ei);
          d_in += ei;
        }
      }
      if (d_out != d_in) continue;
      if (d_out > opt.max_multiplicity)
        throw MultiplicityLimitError("vertex " + std::to_string(v + 1) + " has incident multiplicity " +
                                     std::to_string(d_out) + " > " + std::to_string(opt.max_multiplicity) +
                                     " (exact mode limit; use Monte Carlo)");
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, complex_contractions(in_cls, ins, out_cls, outs, p)).first;

      Monomial base = mono;
      for (std::size_t w = 0; w < p; ++w) {
        if (w == v) continue;
        base[v * p + w] = 0;
        base[w * p + v] = 0;
      }
      const Rational scale = coeff / Rational(rising(N, 1, d_out));
      for (const auto& con : it->second) {
        Monomial m2 = base;
        for (auto [var, inc] : con.increments) m2[var] += inc;
        Rational add = scale * Rational(con.count);
        auto [pos, inserted] = next.try_emplace(std::move(m2), add);
        if (!inserted) pos->second += add;
      }
    }
    for (auto itn = next.begin(); itn != next.end();) {
      if (itn->second == 0) itn = next.erase(itn);
      else ++itn;
    }
    state = std::move(next);
    alive[v] = false;
  }

  Rational value = 0;
  if (!state.empty()) {
    if (state.size() != 1) throw std::logic_error("elimination left a non-constant state");
    value = state.begin()->second;
  }
  return {value, order};
}

}  // namespace spinlab::moments
