#pragma once

// Gaussian reduction of the double nu-integrals
//   I(v, a) = int int e^{-v.(s+t)} (t - s)^a dnu(s) dnu(t),
// where nu is the push-forward of pi^{-qr/2} dX on R^{q x r} under
// X -> tau(X) = (tr(X^T A_j X))_j, so that int e^{-v.s} dnu(s) = P(v)^{-r/2}.
// Then I(v, a) = P(v)^{-r} E[(tau(Y) - tau(X))^a] with X, Y independent,
// columns N(0, Sigma), Sigma = (2 sum_j v_j A_j)^{-1}. Moments of products of
// quadratic forms are pairing sums: each pairing of the 2d half-edges splits
// into cycles, and a cycle through forms j_1..j_l contributes
// r tr(A_{j_1} Sigma ... A_{j_l} Sigma).

#include <spinlab/core/enumerate.hpp>
#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/polynomial.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/linalg/rational_matrix.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::stabledet {

inline constexpr long lemma_degree_cap = 4;
inline constexpr long theta_c_degree_cap = 6;

/// E[prod_j tau_j^{k_j}] for tau_j = sum_{c=1}^r x_c^T A_j x_c, x_c iid N(0, Sigma).
class QuadraticFormMoments {
 public:
  QuadraticFormMoments(const PsdEnsemble& ens, const std::vector<Rational>& v, long r) : r_(r) {
    if (r < 1) throw std::invalid_argument("r must be a positive integer");
    A_ = ens.combination(v);
    if (!ldlt_certify(A_).positive_definite)
      throw std::domain_error("sum_j v_j A_j is not positive definite");
    det_ = determinant(A_);
    const RationalMatrix sigma = inverse(A_ * Rational(2));
    for (std::size_t j = 0; j < ens.n(); ++j) B_.push_back(ens.matrix(j) * sigma);
  }

  std::size_t n() const { return B_.size(); }
  const Rational& P() const { return det_; }  // P(v)

  const Rational& moment(const std::vector<std::uint32_t>& k) {
    if (k.size() != n()) throw std::invalid_argument("moment index length mismatch");
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::vector<std::size_t> labels;
    for (std::size_t j = 0; j < k.size(); ++j) labels.insert(labels.end(), k[j], j);
    const std::size_t d = labels.size();
    Rational total = 0;
    std::vector<std::size_t> partner(2 * d);
    std::vector<bool> seen(d);
    std::vector<std::size_t> cyc;
    for_each_matching(2 * d, [&](const Matching& mt) {
      for (auto [a, b] : mt) {
        partner[a] = b;
        partner[b] = a;
      }
      std::fill(seen.begin(), seen.end(), false);
      Rational prod = 1;
      for (std::size_t start = 0; start < d; ++start) {
        if (seen[start]) continue;
        cyc.clear();
        std::size_t f = start;
        std::size_t h = 2 * f + 1;  // leave through the second half-edge
        while (true) {
          seen[f] = true;
          cyc.push_back(labels[f]);
          const std::size_t into = partner[h];
          f = into / 2;
          if (f == start) break;
          h = into ^ 1U;
        }
        prod *= Rational(r_) * cycle_trace(cyc);
        if (prod == 0) break;
      }
      total += prod;
    });
    return memo_.emplace(k, std::move(total)).first->second;
  }

 private:
  /// tr(B_{c_1} ... B_{c_l}); invariant under rotation and reversal.
  const Rational& cycle_trace(const std::vector<std::size_t>& c) {
    std::vector<std::size_t> best = c;
    const std::size_t l = c.size();
    std::vector<std::size_t> rot(l);
    for (int dir = 0; dir < 2; ++dir)
      for (std::size_t s = 0; s < l; ++s) {
        for (std::size_t t = 0; t < l; ++t) rot[t] = dir == 0 ? c[(s + t) % l] : c[(s + l - t) % l];
        if (rot < best) best = rot;
      }
    auto it = traces_.find(best);
    if (it != traces_.end()) return it->second;
    RationalMatrix M = B_[best[0]];
    for (std::size_t t = 1; t < l; ++t) M = M * B_[best[t]];
    return traces_.emplace(best, M.trace()).first->second;
  }

  long r_;
  RationalMatrix A_;
  Rational det_;
  std::vector<RationalMatrix> B_;
  std::map<std::vector<std::uint32_t>, Rational> memo_;
  std::map<std::vector<std::size_t>, Rational> traces_;
};

namespace detail {

inline std::vector<Rational> to_point(const std::vector<Rational>& v, std::size_t n) {
  if (v.size() != n) throw std::invalid_argument("point length does not match ensemble size");
  for (const auto& x : v)
    if (x <= 0) throw std::invalid_argument("point entries must be strictly positive");
  return v;
}

/// I(v, a) with a shared moment table.
inline Rational lemma_integral(QuadraticFormMoments& mom, const std::vector<std::uint32_t>& a, long r) {
  const std::size_t n = a.size();
  std::vector<std::uint32_t> k(n, 0), rest(n, 0);
  Rational sum = 0;
  auto rec = [&](auto&& self, std::size_t j, BigInt coeff, bool negative) -> void {
    if (j == n) {
      const Rational& mk = mom.moment(k);
      if (mk == 0) return;
      const Rational& mr = mom.moment(rest);
      Rational term = Rational(coeff) * mk * mr;
      if (negative) sum -= term;
      else sum += term;
      return;
    }
    for (std::uint32_t kj = 0; kj <= a[j]; ++kj) {
      k[j] = kj;
      rest[j] = a[j] - kj;
      self(self, j + 1, coeff * binomial(a[j], kj), negative != (((a[j] - kj) & 1U) != 0));
    }
  };
  rec(rec, 0, BigInt(1), false);
  return sum / pow(mom.P(), r);
}

}  // namespace detail

/// int int e^{-v(s+t)^T} (t-s)^a dnu dnu, exact; |a| <= 4.
inline Rational lemma_check(const PsdEnsemble& ens, const std::vector<Rational>& v, const MultiIndex& a, long r,
                            long degree_cap = lemma_degree_cap) {
  if (a.size() != ens.n()) throw std::invalid_argument("multiindex length does not match ensemble size");
  if (a.length() > degree_cap)
    throw std::invalid_argument("|a| = " + std::to_string(a.length()) + " exceeds the Wick-degree cap " +
                                std::to_string(degree_cap));
  QuadraticFormMoments mom(ens, detail::to_point(v, ens.n()), r);
  std::vector<std::uint32_t> e(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) e[j] = static_cast<std::uint32_t>(a[j]);
  return detail::lemma_integral(mom, e, r);
}

/// Theta_{G,I}: average over (g, h) in ({+-1}^L)^2 of
/// prod_{i in I} (g^{rho_i} + eps_i h^{rho_i}) prod_{i not in I} (g^{rho_i} - eps_i h^{rho_i}).
/// Expanding, a subset S picks the h-term: the (g, h) average is
/// sum_S prod_{i in S} eps_i s_i 1{sum_{i not in S} rho_i = 0} 1{sum_{i in S} rho_i = 0},
/// s_i = +1 on I and -1 off I.
inline Rational theta_G(std::size_t L, const std::vector<std::uint64_t>& row_parities, const std::vector<int>& eps,
                        std::uint64_t I) {
  if (L > 16) throw std::invalid_argument("theta_G limited to L <= 16");
  const std::size_t m = row_parities.size();
  if (eps.size() != m) throw std::invalid_argument("eps length does not match the row count");
  if (m > 24) throw std::invalid_argument("theta_G limited to m <= 24");
  const std::uint64_t mask_L = L == 0 ? 0 : ((1ULL << L) - 1);
  std::uint64_t total_par = 0;
  for (auto r : row_parities) {
    if (r & ~mask_L) throw std::invalid_argument("row parity has bits beyond L");
    total_par ^= r;
  }
  long sum = 0;
  for (std::uint64_t S = 0; S < (1ULL << m); ++S) {
    std::uint64_t par = 0;
    int sign = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (!((S >> i) & 1U)) continue;
      par ^= row_parities[i];
      if (eps[i] < 0) sign = -sign;
      if (!((I >> i) & 1U)) sign = -sign;
    }
    if (par == 0 && (par ^ total_par) == 0) sum += sign;
  }
  return Rational(sum);
}

/// Theta_{C,I,gamma}: the double nu-integral of e^{-w(s+t)^T} prod_i (V_i (t-s)^T / 2)^{k_i}
/// with w = u + 1_m V / 2 and k_i = 2 gamma_i + [i not in I].
inline Rational theta_C_gamma(const PsdEnsemble& ens, const MultiIndex& u, const ExponentMatrix& V, std::uint64_t I,
                              const MultiIndex& gamma, long r, long degree_cap = theta_c_degree_cap) {
  const std::size_t n = ens.n();
  const std::size_t m = V.size();
  if (u.size() != n) throw std::invalid_argument("u length does not match ensemble size");
  if (gamma.size() != m) throw std::invalid_argument("gamma length does not match the row count of V");
  long degree = 0;
  std::vector<long> k(m);
  for (std::size_t i = 0; i < m; ++i) {
    k[i] = 2 * gamma[i] + (((I >> i) & 1U) ? 0 : 1);
    degree += k[i];
  }
  if (degree > degree_cap)
    throw std::invalid_argument("total Wick degree " + std::to_string(degree) + " exceeds the cap " +
                                std::to_string(degree_cap));
  std::vector<Rational> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = u[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (V[i].size() != n) throw std::invalid_argument("row length mismatch in V");
      w[j] += Rational(V[i][j], 2);
    }
  }
  Polynomial poly = Polynomial::constant(n, Rational(1));
  for (std::size_t i = 0; i < m; ++i) {
    Polynomial lin(n);
    for (std::size_t j = 0; j < n; ++j)
      if (V[i][j] != 0) lin += Polynomial::variable(n, j) * Rational(V[i][j], 2);
    for (long t = 0; t < k[i]; ++t) poly *= lin;
  }
  QuadraticFormMoments mom(ens, detail::to_point(w, n), r);
  Rational total = 0;
  for (const auto& [e, c] : poly.terms()) total += c * detail::lemma_integral(mom, e, r);
  return total;
}

}  // namespace spinlab::stabledet
