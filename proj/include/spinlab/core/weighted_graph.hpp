#pragma once

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinlab {

/// Number of unordered vertex pairs, i.e. the observable count n = p(p-1)/2.
constexpr std::size_t pair_count(std::size_t p) { return p * (p - 1) / 2; }

/// Lexicographic index of the pair (i, j), i < j, both 0-based.
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t p) {
  if (i > j) std::swap(i, j);
  return i * (2 * p - i - 1) / 2 + (j - i - 1);
}

inline std::pair<std::size_t, std::size_t> pair_at(std::size_t index, std::size_t p) {
  for (std::size_t i = 0; i + 1 < p; ++i) {
    const std::size_t row = p - i - 1;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw std::out_of_range("pair index out of range");
}

struct Edge {
  std::size_t u;  // 0-based, u < v
  std::size_t v;
  long weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// p vertices with a symmetric nonnegative-integer weight matrix, zero diagonal.
/// Serves both as an observable exponent table and as Kirchhoff input.
class WeightedGraph {
 public:
  explicit WeightedGraph(std::size_t p) : p_(p), w_(p * p, 0) {
    if (p < 2) throw std::invalid_argument("a weighted graph needs at least 2 vertices");
  }

  static WeightedGraph from_edges(std::size_t p, const std::vector<Edge>& edges) {
    WeightedGraph g(p);
    for (const auto& e : edges) g.set_weight(e.u, e.v, g.weight(e.u, e.v) + e.weight);
    return g;
  }

  /// Exponents over the p(p-1)/2 pairs in lexicographic order.
  static WeightedGraph from_pair_exponents(std::size_t p, const MultiIndex& a) {
    if (a.size() != pair_count(p)) throw std::invalid_argument("pair exponent vector has the wrong length");
    WeightedGraph g(p);
    for (std::size_t k = 0; k < a.size(); ++k) {
      auto [i, j] = pair_at(k, p);
      g.set_weight(i, j, a[k]);
    }
    return g;
  }

  std::size_t vertex_count() const { return p_; }
  long weight(std::size_t i, std::size_t j) const { return w_.at(i * p_ + j); }

  void set_weight(std::size_t i, std::size_t j, long w) {
    if (i >= p_ || j >= p_) throw std::out_of_range("vertex index out of range");
    if (i == j) {
      if (w != 0) throw std::invalid_argument("self-loops are not allowed");
      return;
    }
    if (w < 0) throw std::invalid_argument("edge weights must be nonnegative");
    w_[i * p_ + j] = w;
    w_[j * p_ + i] = w;
  }

  long degree(std::size_t i) const {
    long d = 0;
    for (std::size_t j = 0; j < p_; ++j) d += weight(i, j);
    return d;
  }
  long max_degree() const {
    long d = 0;
    for (std::size_t i = 0; i < p_; ++i) d = std::max(d, degree(i));
    return d;
  }
  long total_weight() const { return std::accumulate(w_.begin(), w_.end(), 0L) / 2; }

  /// Every vertex degree even.
  bool is_even() const {
    for (std::size_t i = 0; i < p_; ++i)
      if (degree(i) % 2 != 0) return false;
    return true;
  }

  /// Connectivity of the support graph (edges with positive weight).
  bool is_connected() const {
    std::vector<bool> seen(p_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < p_; ++j) {
        if (!seen[j] && weight(i, j) > 0) {
          seen[j] = true;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == p_;
  }

  /// Support edges in canonical (lexicographic endpoint) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = i + 1; j < p_; ++j)
        if (weight(i, j) > 0) out.push_back({i, j, weight(i, j)});
    return out;
  }
  std::size_t edge_count() const { return edges().size(); }

  MultiIndex pair_exponents() const {
    MultiIndex a(pair_count(p_));
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = i + 1; j < p_; ++j) a.set(pair_index(i, j, p_), weight(i, j));
    return a;
  }

  WeightedGraph scaled(long lambda) const {
    if (lambda < 0) throw std::invalid_argument("dilation factor must be nonnegative");
    WeightedGraph g(*this);
    for (auto& w : g.w_) w *= lambda;
    return g;
  }

  /// Row-major weight matrix; usable as a canonical memo key.
  const std::vector<long>& weight_matrix() const { return w_; }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;
  friend auto operator<=>(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::size_t p_;
  std::vector<long> w_;
};

/// The O(N) vertex parity map on p sites: L = p, and the pair (i, i') maps to
/// the vector with ones exactly at components i and i'.
inline ParityMap on_parity_map(std::size_t p) {
  if (p < 2) throw std::invalid_argument("parity map needs at least 2 vertices");
  if (p > ParityMap::max_targets) throw std::invalid_argument("too many vertices for a packed parity map");
  std::vector<std::uint64_t> cols(pair_count(p));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    auto [i, j] = pair_at(k, p);
    cols[k] = (1ULL << i) | (1ULL << j);
  }
  return ParityMap(p, std::move(cols));
}

inline ParityMap on_parity_map(const WeightedGraph& g) { return on_parity_map(g.vertex_count()); }

/// Parity map over the support edges of g only (the index set of Kirchhoff variables).
inline ParityMap edge_parity_map(const WeightedGraph& g) {
  auto es = g.edges();
  std::vector<std::uint64_t> cols;
  for (const auto& e : es) cols.push_back((1ULL << e.u) | (1ULL << e.v));
  return ParityMap(g.vertex_count(), std::move(cols));
}

}  // namespace spinlab
