#pragma once

// Random instance helpers shared by unit and acceptance tests.

#include <spinlab/core/random.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/linalg/rational_matrix.hpp>
#include <spinlab/stabledet/battery.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include <string>
#include <vector>

namespace support {

using namespace spinlab;

inline std::string data_path(const std::string& name) { return std::string(SPINLAB_DATA_DIR) + "/" + name; }

/// Positive rational with numerator/denominator in [1, 9].
inline Rational random_positive(std::mt19937_64& rng, long hi = 9) {
  Rational q(uniform_int(rng, 1, hi), uniform_int(rng, 1, hi));
  q.canonicalize();
  return q;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t n, long hi = 9) {
  std::vector<Rational> x(n);
  for (auto& v : x) v = random_positive(rng, hi);
  return x;
}

/// Connected simple graph (unit weights) on p vertices with a random number of extra edges.
inline WeightedGraph random_connected(std::mt19937_64& rng, std::size_t p) {
  const std::size_t max_e = pair_count(p);
  const auto extra = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(max_e - (p - 1))));
  return stabledet::detail::random_connected_graph(rng, p, p - 1 + extra);
}

inline stabledet::PsdEnsemble random_ensemble(std::mt19937_64& rng, std::size_t q, std::size_t n, long max_entry = 2) {
  return stabledet::detail::random_psd_ensemble(rng, q, n, max_entry);
}

}  // namespace support
