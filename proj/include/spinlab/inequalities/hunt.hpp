#pragma once

// Randomized GG/PGG search over O(N) oracles. Every instance is a pure
// function of (seed, index), so a reported violation replays exactly.

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/random.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/inequalities/inequalities.hpp>
#include <spinlab/inequalities/oracle.hpp>
#include <spinlab/moments/elimination.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinlab::inequalities {

struct HuntConfig {
  long N_min = 3;
  long N_max = 3;
  std::size_t p = 3;
  long max_weight = 2;
  std::size_t m = 4;
  long max_padding = 2;  // 0 disables padding (plain GG)
  std::uint64_t count = 100;
  std::uint64_t seed = 1;
  double minus_probability = 0.5;
};

struct HuntInstance {
  std::uint64_t index = 0;
  long N = 1;
  std::size_t p = 2;
  ExponentMatrix V;
  std::vector<int> eps;
  MultiIndex u;
};

struct Violation {
  HuntInstance instance;
  Rational margin;
};

struct HuntReport {
  std::uint64_t instances = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;  // exceeded the exact-moment degree cap
  Rational min_margin = 0;
  bool have_min = false;
  std::vector<Violation> violations;
};

inline void check_config(const HuntConfig& c) {
  if (c.N_min < 1 || c.N_max < c.N_min) throw std::invalid_argument("invalid N range");
  if (c.p < 2 || c.p > 6) throw std::invalid_argument("hunt supports 2 <= p <= 6");
  if (c.m > 12) throw std::invalid_argument("hunt supports m <= 12");
  if (c.max_weight < 0 || c.max_weight > 6) throw std::invalid_argument("max weight must be in [0, 6]");
  if (c.max_padding < 0 || c.max_padding > 6) throw std::invalid_argument("max padding must be in [0, 6]");
}

/// The index-th instance of the battery.
inline HuntInstance hunt_instance(const HuntConfig& c, std::uint64_t index) {
  auto rng = SeedTree(c.seed).child(index).engine();
  HuntInstance inst;
  inst.index = index;
  inst.p = c.p;
  inst.N = uniform_int(rng, c.N_min, c.N_max);
  const std::size_t n = pair_count(c.p);
  for (std::size_t i = 0; i < c.m; ++i) {
    MultiIndex row(n);
    for (std::size_t j = 0; j < n; ++j) row.set(j, uniform_int(rng, 0, c.max_weight));
    inst.V.push_back(std::move(row));
    inst.eps.push_back(coin(rng, c.minus_probability) ? -1 : 1);
  }
  inst.u = MultiIndex(n);
  if (c.max_padding > 0) {
    const auto rho = on_parity_map(c.p);
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      for (std::size_t j = 0; j < n; ++j) inst.u.set(j, uniform_int(rng, 0, c.max_padding));
      ok = rho.is_even(inst.u);
    }
    if (!ok)
      for (std::size_t j = 0; j < n; ++j) inst.u.set(j, 2 * (inst.u[j] / 2));
  }
  return inst;
}

inline Rational replay(const HuntInstance& inst) {
  auto O = CorrelationOracle::on(inst.p, inst.N);
  return pgg_value(O, inst.V, inst.eps, inst.u);
}

inline HuntReport hunt(const HuntConfig& c) {
  check_config(c);
  HuntReport rep;
  for (std::uint64_t k = 0; k < c.count; ++k) {
    auto inst = hunt_instance(c, k);
    ++rep.instances;
    Rational margin;
    try {
      margin = replay(inst);
    } catch (const moments::MultiplicityLimitError&) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    if (!rep.have_min || margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.have_min = true;
    }
    if (margin < 0) rep.violations.push_back({std::move(inst), margin});
  }
  return rep;
}

}  // namespace spinlab::inequalities
