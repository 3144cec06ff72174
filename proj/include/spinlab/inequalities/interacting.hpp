#pragma once

// Correlations at nonzero ferromagnetic coupling by direct sampling from the
// free measure with weight exp(sum_i J_i O^{V_i}). |O_j| <= 1, so weights are
// bounded by exp(sum J_i) and no MCMC is needed.

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/random.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/moments/moments.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinlab::inequalities {

struct CouplingSpec {
  ExponentMatrix V;
  std::vector<Rational> J;
};

inline void validate(const CouplingSpec& c, std::size_t n) {
  if (c.V.size() != c.J.size()) throw std::invalid_argument("V and J have different row counts");
  for (const auto& j : c.J)
    if (j < 0) throw std::invalid_argument("couplings must be nonnegative (ferromagnetic)");
  for (const auto& row : c.V)
    if (row.size() != n) throw std::invalid_argument("coupling row length does not match the observable count");
}

struct McRatio {
  double mean = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
};

namespace detail {

inline double monomial(const std::vector<double>& obs, const MultiIndex& a) {
  double v = 1;
  for (std::size_t j = 0; j < obs.size(); ++j)
    if (a[j]) v *= std::pow(obs[j], static_cast<double>(a[j]));
  return v;
}

/// Streams (observable vector) for each sample of the free measure.
template <class F>
void sample_observables(moments::Model model, std::size_t p, long N, std::uint64_t samples, std::uint64_t seed,
                        F&& visit) {
  auto rng = SeedTree(seed).child(0x1a7e5ULL + static_cast<std::uint64_t>(model)).engine();
  const std::size_t n = pair_count(p);
  std::vector<double> obs(n), gram;
  std::vector<std::vector<double>> rs;
  std::vector<std::vector<std::complex<double>>> cs;
  for (std::uint64_t s = 0; s < samples; ++s) {
    if (model == moments::Model::ON) moments::real_gram(rng, p, N, rs, gram);
    else moments::complex_gram(rng, p, N, cs, gram);
    for (std::size_t k = 0; k < n; ++k) {
      auto [i, j] = pair_at(k, p);
      obs[k] = gram[i * p + j];
    }
    visit(obs);
  }
}

/// Sample means and covariance of a fixed set of per-sample quantities.
template <std::size_t K>
struct Moments {
  std::array<double, K> mean{};
  std::array<std::array<double, K>, K> cov{};
  std::uint64_t n = 0;

  void add(const std::array<double, K>& x) {
    ++n;
    std::array<double, K> d;
    for (std::size_t i = 0; i < K; ++i) {
      d[i] = x[i] - mean[i];
      mean[i] += d[i] / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) cov[i][j] += d[i] * (x[j] - mean[j]);
  }
  double covariance(std::size_t i, std::size_t j) const { return n > 1 ? cov[i][j] / static_cast<double>(n - 1) : 0.0; }
};

template <std::size_t K>
double delta_stderr(const Moments<K>& m, const std::array<double, K>& grad) {
  double v = 0;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) v += grad[i] * grad[j] * m.covariance(i, j);
  return v > 0 ? std::sqrt(v / static_cast<double>(m.n)) : 0.0;
}

inline double log_weight(const CouplingSpec& c, const std::vector<double>& obs) {
  double s = 0;
  for (std::size_t i = 0; i < c.V.size(); ++i) s += c.J[i].get_d() * monomial(obs, c.V[i]);
  return s;
}

}  // namespace detail

/// <O^a>_J = E[O^a w] / E[w], ratio estimator with delta-method error.
inline McRatio interacting_moment_mc(moments::Model model, std::size_t p, long N, const CouplingSpec& coupling,
                                     const MultiIndex& a, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const std::size_t n = pair_count(p);
  if (a.size() != n) throw std::invalid_argument("exponent length does not match the observable count");
  validate(coupling, n);
  detail::Moments<2> mom;
  detail::sample_observables(model, p, N, samples, seed, [&](const std::vector<double>& obs) {
    const double w = std::exp(detail::log_weight(coupling, obs));
    mom.add({w, w * detail::monomial(obs, a)});
  });
  const double W = mom.mean[0], Y = mom.mean[1];
  McRatio r;
  r.samples = samples;
  r.mean = Y / W;
  r.stderr_ = detail::delta_stderr(mom, {-Y / (W * W), 1.0 / W});
  return r;
}

/// <O^{a+b}>_J - <O^a>_J <O^b>_J from one sample stream.
inline McRatio gks2_mc_check(moments::Model model, std::size_t p, long N, const CouplingSpec& coupling,
                             const MultiIndex& a, const MultiIndex& b, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const std::size_t n = pair_count(p);
  if (a.size() != n || b.size() != n) throw std::invalid_argument("exponent length does not match the observable count");
  validate(coupling, n);
  const MultiIndex ab = a + b;
  detail::Moments<4> mom;
  detail::sample_observables(model, p, N, samples, seed, [&](const std::vector<double>& obs) {
    const double w = std::exp(detail::log_weight(coupling, obs));
    mom.add({w, w * detail::monomial(obs, a), w * detail::monomial(obs, b), w * detail::monomial(obs, ab)});
  });
  const double W = mom.mean[0], Ya = mom.mean[1], Yb = mom.mean[2], Yab = mom.mean[3];
  McRatio r;
  r.samples = samples;
  r.mean = Yab / W - (Ya / W) * (Yb / W);
  const double W2 = W * W, W3 = W2 * W;
  r.stderr_ = detail::delta_stderr(mom, {-Yab / W2 + 2 * Ya * Yb / W3, -Yb / W2, -Ya / W2, 1.0 / W});
  return r;
}

}  // namespace spinlab::inequalities
