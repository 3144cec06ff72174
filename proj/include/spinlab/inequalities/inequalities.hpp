#pragma once

// CGKS 2, PCGKS 2, GG and PGG margins over any callable a -> <O^a>.

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/inequalities/oracle.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::inequalities {

namespace detail {

inline void check_rows(const ExponentMatrix& V, std::size_t n) {
  for (std::size_t i = 0; i < V.size(); ++i)
    if (V[i].size() != n)
      throw std::invalid_argument("row " + std::to_string(i + 1) + " of V has length " + std::to_string(V[i].size()) +
                                  ", expected " + std::to_string(n));
}

/// Visits every alpha <= gamma (componentwise) with C(gamma, alpha).
template <class F>
void for_each_split(const MultiIndex& gamma, F&& visit) {
  const std::size_t m = gamma.size();
  std::vector<long> alpha(m, 0);
  auto rec = [&](auto&& self, std::size_t i, BigInt coeff) -> void {
    if (i == m) {
      visit(std::span<const long>(alpha), coeff);
      return;
    }
    for (long ai = 0; ai <= gamma[i]; ++ai) {
      alpha[i] = ai;
      self(self, i + 1, coeff * binomial(gamma[i], ai));
    }
    alpha[i] = 0;
  };
  rec(rec, 0, BigInt(1));
}

}  // namespace detail

/// sum_{alpha+beta=gamma} C(gamma,alpha) [<u+a+b+alpha V><u+beta V> - <u+a+alpha V><u+b+beta V>],
/// with no evenness check on u.
template <class Oracle>
Rational pcgks2_margin_unchecked(const Oracle& O, const ExponentMatrix& V, const MultiIndex& a, const MultiIndex& b,
                                 const MultiIndex& gamma, const MultiIndex& u) {
  const std::size_t n = a.size();
  if (b.size() != n || u.size() != n) throw std::invalid_argument("a, b, u must have the same length");
  if (gamma.size() != V.size()) throw std::invalid_argument("gamma length does not match the row count of V");
  detail::check_rows(V, n);
  std::vector<long> beta(gamma.size());
  Rational total = 0;
  detail::for_each_split(gamma, [&](std::span<const long> alpha, const BigInt& c) {
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = gamma[i] - alpha[i];
    const MultiIndex aV = combine_rows(V, alpha, n);
    const MultiIndex bV = combine_rows(V, std::span<const long>(beta), n);
    const Rational lhs = O(u + a + b + aV) * O(u + bV);
    const Rational rhs = O(u + a + aV) * O(u + b + bV);
    total += Rational(c) * (lhs - rhs);
  });
  return total;
}

template <class Oracle>
Rational cgks2_margin(const Oracle& O, const ExponentMatrix& V, const MultiIndex& a, const MultiIndex& b,
                      const MultiIndex& gamma) {
  return pcgks2_margin_unchecked(O, V, a, b, gamma, MultiIndex(a.size()));
}

inline Rational pcgks2_margin(const CorrelationOracle& O, const ExponentMatrix& V, const MultiIndex& a,
                              const MultiIndex& b, const MultiIndex& gamma, const MultiIndex& u) {
  if (u.size() != O.dimension()) throw std::invalid_argument("u length does not match oracle dimension");
  if (!O.parity().is_even(u)) throw std::invalid_argument("padding u is not even under the oracle's parity map");
  return pcgks2_margin_unchecked(O, V, a, b, gamma, u);
}

/// sum_{alpha+beta=1_m} eps^beta <u+alpha V><u+beta V>, no evenness check on u.
template <class Oracle>
Rational pgg_value_unchecked(const Oracle& O, const ExponentMatrix& V, const std::vector<int>& eps,
                             const MultiIndex& u) {
  const std::size_t n = u.size();
  const std::size_t m = V.size();
  if (eps.size() != m) throw std::invalid_argument("eps length does not match the row count of V");
  if (m > 20) throw std::invalid_argument("m exceeds the 2^m enumeration bound (20)");
  for (auto e : eps)
    if (e != 1 && e != -1) throw std::invalid_argument("eps entries must be +1 or -1");
  detail::check_rows(V, n);
  const std::uint64_t full = m == 0 ? 0 : ((1ULL << m) - 1);
  Rational total = 0;
  for (std::uint64_t alpha = 0; alpha <= full; ++alpha) {
    const std::uint64_t beta = full & ~alpha;
    int sign = 1;
    for (std::size_t i = 0; i < m; ++i)
      if (((beta >> i) & 1U) && eps[i] < 0) sign = -sign;
    const Rational left = O(u + combine_rows(V, alpha, n));
    if (left == 0) continue;
    const Rational term = left * O(u + combine_rows(V, beta, n));
    if (sign > 0) total += term;
    else total -= term;
  }
  return total;
}

inline Rational pgg_value(const CorrelationOracle& O, const ExponentMatrix& V, const std::vector<int>& eps,
                          const MultiIndex& u) {
  if (u.size() != O.dimension()) throw std::invalid_argument("u length does not match oracle dimension");
  if (!O.parity().is_even(u)) throw std::invalid_argument("padding u is not even under the oracle's parity map");
  return pgg_value_unchecked(O, V, eps, u);
}

inline Rational gg_value(const CorrelationOracle& O, const ExponentMatrix& V, const std::vector<int>& eps) {
  return pgg_value_unchecked(O, V, eps, MultiIndex(O.dimension()));
}

}  // namespace spinlab::inequalities
