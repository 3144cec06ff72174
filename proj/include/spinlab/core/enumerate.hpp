#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinlab {

/// A perfect matching as pairs of half-edge positions (first < second).
using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

namespace detail {

template <class F>
void match_first_unmatched(std::vector<bool>& used, Matching& current, F& visit) {
  std::size_t first = 0;
  while (first < used.size() && used[first]) ++first;
  if (first == used.size()) {
    visit(static_cast<const Matching&>(current));
    return;
  }
  used[first] = true;
  for (std::size_t partner = first + 1; partner < used.size(); ++partner) {
    if (used[partner]) continue;
    used[partner] = true;
    current.emplace_back(first, partner);
    match_first_unmatched(used, current, visit);
    current.pop_back();
    used[partner] = false;
  }
  used[first] = false;
}

}  // namespace detail

/// Streams every perfect matching of the half-edges, each exactly once, in the
/// canonical order produced by always matching the first unmatched half-edge.
/// The labels only fix the count; callers map positions back to their classes.
/// Returns false (and visits nothing) when the count is odd.
template <class Label, class F>
bool for_each_matching(std::span<const Label> halfedges, F&& visit) {
  if (halfedges.size() % 2 != 0) return false;
  std::vector<bool> used(halfedges.size(), false);
  Matching current;
  current.reserve(halfedges.size() / 2);
  detail::match_first_unmatched(used, current, visit);
  return true;
}

/// Same, for d anonymous half-edges.
template <class F>
bool for_each_matching(std::size_t d, F&& visit) {
  std::vector<int> labels(d, 0);
  return for_each_matching(std::span<const int>(labels), std::forward<F>(visit));
}

template <class Label>
std::vector<Matching> perfect_matchings(std::span<const Label> halfedges) {
  std::vector<Matching> out;
  if (!for_each_matching(halfedges, [&](const Matching& m) { out.push_back(m); }))
    throw std::invalid_argument("odd number of half-edges has no perfect matching");
  return out;
}

/// Visits the 2^m subsets of {0..m-1} as bitmasks in increasing order.
template <class F>
void for_each_subset(std::size_t m, F&& visit) {
  if (m > 40) throw std::invalid_argument("subset enumeration limited to m <= 40");
  const std::uint64_t count = 1ULL << m;
  for (std::uint64_t mask = 0; mask < count; ++mask) visit(mask);
}

inline std::vector<std::uint64_t> subsets(std::size_t m) {
  std::vector<std::uint64_t> out;
  for_each_subset(m, [&](std::uint64_t s) { out.push_back(s); });
  return out;
}

}  // namespace spinlab
