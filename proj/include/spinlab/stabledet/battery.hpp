#pragma once

// Randomized Theorem-3 battery: random PSD ensembles (A_j = B_j^T B_j) or
// Kirchhoff ensembles of random connected graphs, with random instances
// satisfying the evenness hypotheses.

#include <spinlab/core/hash.hpp>
#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/random.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/stabledet/ensemble.hpp>
#include <spinlab/stabledet/pgg.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace spinlab::stabledet {

enum class EnsembleKind { Random, Kirchhoff };

struct BatteryConfig {
  std::size_t q = 3;  // matrix size (Kirchhoff: q + 1 vertices)
  std::size_t n = 4;  // number of matrices (Kirchhoff: number of edges)
  std::size_t m = 6;
  long r = 1;
  std::uint64_t count = 100;
  std::uint64_t seed = 1;
  EnsembleKind kind = EnsembleKind::Random;
  unsigned jobs = 1;
  long max_entry = 2;    // |B_j| entries and V entries
  std::size_t max_L = 3;  // random parity targets (Random kind)
  PrecisionPolicy precision{};
};

struct GeneratedInstance {
  PsdEnsemble ensemble;
  PggInstance instance;
};

struct BatteryRecord {
  std::uint64_t index = 0;
  std::uint64_t hash = 0;
  Verdict verdict = Verdict::Inconclusive;
  double theta_lower = 0;
  double theta_mid = 0;
  std::optional<Rational> exact;
  long precision_bits = 0;
};

struct BatteryReport {
  BatteryConfig config;
  std::uint64_t instances = 0;
  std::uint64_t falsifications = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t exact_zero = 0;
  std::optional<double> min_theta;
  std::optional<std::uint64_t> min_index;
  std::vector<BatteryRecord> records;  // sorted by (hash, index)
};

inline void check_config(const BatteryConfig& c) {
  if (c.q < 1 || c.q > 8) throw std::invalid_argument("battery q must be in [1, 8]");
  if (c.n < 1 || c.n > 12) throw std::invalid_argument("battery n must be in [1, 12]");
  if (c.m > 12) throw std::invalid_argument("battery m must be at most 12");
  if (c.r < 1) throw std::invalid_argument("battery r must be positive");
  if (c.kind == EnsembleKind::Kirchhoff) {
    const std::size_t p = c.q + 1;
    if (c.n < p - 1 || c.n > pair_count(p))
      throw std::invalid_argument("Kirchhoff battery needs q <= n <= (q+1)q/2 edges");
  }
}

/// Canonical text of an ensemble + instance, hashed for replay.
inline std::string canonical_text(const PsdEnsemble& e, const PggInstance& in) {
  std::string s = "q" + std::to_string(e.q()) + "n" + std::to_string(e.n()) + "|";
  for (const auto& A : e.matrices())
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j).get_str() + ",";
  s += "|V";
  for (const auto& row : in.V) s += row.to_string();
  s += "|e";
  for (auto x : in.eps) s += x > 0 ? "+" : "-";
  s += "|u" + in.u.to_string() + "|r" + std::to_string(in.r) + "|rho";
  for (const auto& row : in.rho.rows())
    for (auto bit : row) s += bit ? '1' : '0';
  return s;
}

namespace detail {

inline PsdEnsemble random_psd_ensemble(std::mt19937_64& rng, std::size_t q, std::size_t n, long max_entry) {
  for (int attempt = 0;; ++attempt) {
    std::vector<RationalMatrix> mats;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(q)));
      RationalMatrix B(k, q);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < q; ++b) B(a, b) = uniform_int(rng, -max_entry, max_entry);
      mats.push_back(B.transpose() * B);
    }
    RationalMatrix sum(q, q);
    for (const auto& A : mats) sum += A;
    if (ldlt_certify(sum).positive_definite) return PsdEnsemble(std::move(mats));
    if (attempt > 1000) throw std::runtime_error("could not sample a positive definite ensemble");
  }
}

/// Random spanning tree on p vertices, then extra distinct edges up to `edges`.
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t p, std::size_t edges) {
  WeightedGraph g(p);
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  for (std::size_t i = p; i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(i) - 1))]);
  for (std::size_t i = 1; i < p; ++i) {
    const std::size_t parent = order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(i) - 1))];
    g.set_weight(order[i], parent, 1);
  }
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (g.weight(i, j) == 0) missing.emplace_back(i, j);
  while (g.edge_count() < edges) {
    const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(missing.size()) - 1));
    g.set_weight(missing[k].first, missing[k].second, 1);
    missing.erase(missing.begin() + static_cast<long>(k));
  }
  return g;
}

inline PggInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, long r, long max_entry,
                                   ParityMap rho) {
  PggInstance in;
  in.r = r;
  in.rho = std::move(rho);
  for (std::size_t i = 0; i < m; ++i) in.eps.push_back(coin(rng) ? 1 : -1);
  bool ok = false;
  for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
    in.V.clear();
    for (std::size_t i = 0; i < m; ++i) {
      MultiIndex row(n);
      for (std::size_t j = 0; j < n; ++j) row.set(j, uniform_int(rng, 0, max_entry));
      in.V.push_back(std::move(row));
    }
    ok = in.rho.is_even(row_sum(in.V, n));
  }
  if (!ok && m > 0) {
    // adding the odd part of 1_m V to the last row makes 1_m V entrywise even
    const MultiIndex s = row_sum(in.V, n);
    for (std::size_t j = 0; j < n; ++j)
      if (s[j] & 1) in.V[m - 1].add_at(j, 1);
  }
  ok = false;
  in.u = MultiIndex(n);
  for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
    for (std::size_t j = 0; j < n; ++j) in.u.set(j, uniform_int(rng, 1, 3));
    ok = in.rho.is_even(in.u);
  }
  if (!ok)
    for (std::size_t j = 0; j < n; ++j) in.u.set(j, 2 * uniform_int(rng, 1, 2));
  return in;
}

}  // namespace detail

/// The index-th instance of a battery, a pure function of (config, index).
inline GeneratedInstance battery_instance(const BatteryConfig& c, std::uint64_t index) {
  auto rng = SeedTree(c.seed).child(index).engine();
  if (c.kind == EnsembleKind::Kirchhoff) {
    auto g = detail::random_connected_graph(rng, c.q + 1, c.n);
    auto ens = kirchhoff::determinantal_rep(g);
    auto inst = detail::random_instance(rng, c.n, c.m, c.r, c.max_entry, edge_parity_map(g));
    return {std::move(ens), std::move(inst)};
  }
  auto ens = detail::random_psd_ensemble(rng, c.q, c.n, c.max_entry);
  const std::size_t L = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(c.max_L)));
  std::vector<std::vector<int>> bits(L, std::vector<int>(c.n));
  for (auto& row : bits)
    for (auto& b : row) b = coin(rng) ? 1 : 0;
  auto inst = detail::random_instance(rng, c.n, c.m, c.r, c.max_entry, ParityMap::from_rows(bits, c.n));
  return {std::move(ens), std::move(inst)};
}

inline BatteryRecord run_battery_instance(const BatteryConfig& c, std::uint64_t index) {
  auto gen = battery_instance(c, index);
  auto res = pgg_theta(gen.ensemble, gen.instance, c.precision);
  BatteryRecord rec;
  rec.index = index;
  rec.hash = fnv1a64(canonical_text(gen.ensemble, gen.instance));
  rec.verdict = res.verdict;
  rec.theta_lower = res.enclosure.lower_double();
  rec.theta_mid = res.enclosure.midpoint_double();
  rec.exact = res.exact;
  rec.precision_bits = res.precision_bits;
  return rec;
}

inline BatteryReport random_pgg_battery(const BatteryConfig& c) {
  check_config(c);
  BatteryReport rep;
  rep.config = c;
  rep.records.resize(c.count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    while (true) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= c.count) return;
      try {
        rep.records[k] = run_battery_instance(c, k);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned jobs = std::max(1U, c.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& rec : rep.records) {
    ++rep.instances;
    if (rec.verdict == Verdict::CertifiedNegative) ++rep.falsifications;
    if (rec.verdict == Verdict::Inconclusive) ++rep.inconclusive;
    if (rec.exact && *rec.exact == 0) ++rep.exact_zero;
    if (!rep.min_theta || rec.theta_mid < *rep.min_theta) {
      rep.min_theta = rec.theta_mid;
      rep.min_index = rec.index;
    }
  }
  std::sort(rep.records.begin(), rep.records.end(), [](const BatteryRecord& a, const BatteryRecord& b) {
    return a.hash != b.hash ? a.hash < b.hash : a.index < b.index;
  });
  return rep;
}

}  // namespace spinlab::stabledet
