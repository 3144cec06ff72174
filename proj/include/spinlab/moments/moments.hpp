#pragma once

#include <spinlab/core/random.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/moments/elimination.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace spinlab::moments {

struct MomentResult {
  Rational value;
  long N = 1;
  Model model = Model::ON;
  std::vector<std::size_t> elimination_order;
};

/// Memo keyed by (model, N, weight matrix). Concurrent readers; a writer
/// racing another on the same key simply overwrites with the identical value.
class MomentCache {
 public:
  using Key = std::tuple<int, long, std::vector<long>>;

  bool lookup(const Key& k, MomentResult& out) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }
  void store(const Key& k, const MomentResult& r) {
    std::unique_lock lock(mu_);
    map_[k] = r;
  }
  std::size_t size() const {
    std::shared_lock lock(mu_);
    return map_.size();
  }
  void clear() {
    std::unique_lock lock(mu_);
    map_.clear();
  }

  static MomentCache& global() {
    static MomentCache c;
    return c;
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<Key, MomentResult> map_;
};

namespace detail {

inline MomentResult cached_moment(Model model, const WeightedGraph& g, long N, const EliminationOptions& opt) {
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const bool use_cache = !opt.order.has_value();
  MomentCache::Key key{static_cast<int>(model), N, g.weight_matrix()};
  MomentResult r;
  if (use_cache && MomentCache::global().lookup(key, r)) return r;
  auto out = model == Model::ON ? eliminate_on(g, N, opt) : eliminate_cpn(g, N, opt);
  r.value = std::move(out.value);
  r.N = N;
  r.model = model;
  r.elimination_order = std::move(out.order);
  if (use_cache) MomentCache::global().store(key, r);
  return r;
}

}  // namespace detail

/// <prod_{i<j} (sigma_i . sigma_j)^{m_ij}> over (S^{N-1})^p, exact.
inline MomentResult on_moment(const WeightedGraph& g, long N, const EliminationOptions& opt = {}) {
  return detail::cached_moment(Model::ON, g, N, opt);
}

/// <prod_{i<j} |<z_i, z_j>|^{2 m_ij}> over unit spheres of C^N, exact.
inline MomentResult cpn_moment(const WeightedGraph& g, long N, const EliminationOptions& opt = {}) {
  return detail::cached_moment(Model::CPN, g, N, opt);
}

inline MomentResult moment(Model model, const WeightedGraph& g, long N, const EliminationOptions& opt = {}) {
  return detail::cached_moment(model, g, N, opt);
}

/// <(sigma_1 . sigma_2)^{2x}> = (2x-1)!! / (N (N+2) ... (N+2x-2)).
inline Rational on_pair_closed_form(long x, long N) {
  if (x < 0) throw std::invalid_argument("x must be nonnegative");
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  Rational r(double_factorial(2 * x - 1), detail::rising(N, 2, x));
  r.canonicalize();
  return r;
}

/// <|<z_1, z_2>|^{2m}> = m! (N-1)! / (N-1+m)!.
inline Rational cpn_pair_closed_form(long m, long N) {
  if (m < 0) throw std::invalid_argument("m must be nonnegative");
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  Rational r(factorial(m), detail::rising(N, 1, m));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- Monte Carlo

struct McEstimate {
  double mean = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
};

/// Standard normal from raw engine bits (Box-Muller); the stdlib
/// distributions are not reproducible across implementations.
inline double standard_normal(std::mt19937_64& rng) {
  double u1;
  do {
    u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  } while (u1 <= 0.0);
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline void sample_real_sphere(std::mt19937_64& rng, std::vector<double>& v) {
  double norm2;
  do {
    norm2 = 0;
    for (auto& c : v) {
      c = standard_normal(rng);
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= s;
}

inline void sample_complex_sphere(std::mt19937_64& rng, std::vector<std::complex<double>>& v) {
  double norm2;
  do {
    norm2 = 0;
    for (auto& c : v) {
      c = {standard_normal(rng), standard_normal(rng)};
      norm2 += std::norm(c);
    }
  } while (norm2 == 0.0);
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= s;
}

/// Running mean / standard error (Welford).
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }
  std::uint64_t count() const { return n_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0, m2_ = 0;
};

/// All p x p real inner products of one configuration (row-major).
inline void real_gram(std::mt19937_64& rng, std::size_t p, long N, std::vector<std::vector<double>>& spins,
                      std::vector<double>& gram) {
  spins.assign(p, std::vector<double>(static_cast<std::size_t>(N)));
  for (auto& s : spins) sample_real_sphere(rng, s);
  gram.assign(p * p, 1.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      double d = 0;
      for (long k = 0; k < N; ++k) d += spins[i][k] * spins[j][k];
      gram[i * p + j] = gram[j * p + i] = d;
    }
}

/// |<z_i, z_j>|^2 for one configuration.
inline void complex_gram(std::mt19937_64& rng, std::size_t p, long N,
                         std::vector<std::vector<std::complex<double>>>& spins, std::vector<double>& gram) {
  spins.assign(p, std::vector<std::complex<double>>(static_cast<std::size_t>(N)));
  for (auto& s : spins) sample_complex_sphere(rng, s);
  gram.assign(p * p, 1.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      std::complex<double> d = 0;
      for (long k = 0; k < N; ++k) d += std::conj(spins[i][k]) * spins[j][k];
      gram[i * p + j] = gram[j * p + i] = std::norm(d);
    }
}

/// Observable monomial prod_{i<j} gram_ij^{m_ij}.
inline double observable(const WeightedGraph& g, const std::vector<double>& gram) {
  const std::size_t p = g.vertex_count();
  double v = 1;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const long w = g.weight(i, j);
      if (w) v *= std::pow(gram[i * p + j], static_cast<double>(w));
    }
  return v;
}

inline McEstimate moment_mc(Model model, const WeightedGraph& g, long N, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  auto rng = SeedTree(seed).child(static_cast<std::uint64_t>(model)).engine();
  const std::size_t p = g.vertex_count();
  RunningStats st;
  std::vector<std::vector<double>> rs;
  std::vector<std::vector<std::complex<double>>> cs;
  std::vector<double> gram;
  for (std::uint64_t s = 0; s < samples; ++s) {
    if (model == Model::ON) real_gram(rng, p, N, rs, gram);
    else complex_gram(rng, p, N, cs, gram);
    st.add(observable(g, gram));
  }
  return {st.mean(), st.stderr_(), samples};
}

inline McEstimate on_moment_mc(const WeightedGraph& g, long N, std::uint64_t samples, std::uint64_t seed) {
  return moment_mc(Model::ON, g, N, samples, seed);
}
inline McEstimate cpn_moment_mc(const WeightedGraph& g, long N, std::uint64_t samples, std::uint64_t seed) {
  return moment_mc(Model::CPN, g, N, samples, seed);
}

}  // namespace spinlab::moments
