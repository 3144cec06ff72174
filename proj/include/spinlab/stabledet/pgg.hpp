#pragma once

// Theta = sum_{alpha+beta=1_m} 1{alpha V even} eps^beta P(u+alpha V)^{-r/2} P(u+beta V)^{-r/2}.
//
// Every term is K^{-r/2} with K = P(u+alpha V) P(u+beta V) rational. For even r
// Theta is rational. For odd r, K^{-r/2} = K^{-(r-1)/2} K^{-1/2}; terms are
// grouped by square class of K (K = R t^2), giving Theta = sum_R C_R / sqrt(R)
// with exact rationals C_R. Square roots of pairwise non-square-equivalent
// rationals are linearly independent over Q, so Theta = 0 iff every C_R = 0;
// otherwise the sign is settled by interval evaluation with escalating precision.

#include <spinlab/core/interval.hpp>
#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::stabledet {

inline constexpr std::size_t max_pgg_rows = 20;

struct PggInstance {
  ExponentMatrix V;  // m rows of length n
  std::vector<int> eps;
  MultiIndex u;
  long r = 1;
  ParityMap rho;

  std::size_t m() const { return V.size(); }
  std::size_t n() const { return u.size(); }
};

/// Throws std::invalid_argument naming the first violated hypothesis.
inline void validate(const PggInstance& inst, std::size_t ensemble_n) {
  const std::size_t n = inst.n();
  if (n != ensemble_n)
    throw std::invalid_argument("u has length " + std::to_string(n) + " but the ensemble has " +
                                std::to_string(ensemble_n) + " matrices");
  if (inst.m() > max_pgg_rows) throw std::invalid_argument("m exceeds the 2^m enumeration bound (20)");
  if (inst.eps.size() != inst.m()) throw std::invalid_argument("eps length does not match the row count of V");
  for (auto e : inst.eps)
    if (e != 1 && e != -1) throw std::invalid_argument("eps entries must be +1 or -1");
  for (std::size_t i = 0; i < inst.m(); ++i)
    if (inst.V[i].size() != n) throw std::invalid_argument("row " + std::to_string(i + 1) + " of V has the wrong length");
  for (std::size_t j = 0; j < n; ++j)
    if (inst.u[j] <= 0) throw std::invalid_argument("u must be strictly positive");
  if (inst.r < 1) throw std::invalid_argument("r must be a positive integer");
  if (inst.rho.dimension() != n) throw std::invalid_argument("parity map dimension does not match n");
  if (!inst.rho.is_even(inst.u)) throw std::invalid_argument("u is not even under rho");
  if (!inst.rho.is_even(row_sum(inst.V, n))) throw std::invalid_argument("1_m V is not even under rho");
}

enum class Verdict { CertifiedNonnegative, CertifiedNegative, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CertifiedNonnegative: return "certified_nonnegative";
    case Verdict::CertifiedNegative: return "certified_negative";
    default: return "inconclusive";
  }
}

struct PrecisionPolicy {
  long start_bits = 64;
  long cap_bits = 1024;
};

/// SPINLAB_PRECISION_CAP overrides the ceiling when set to a positive integer.
inline long precision_cap_from_env(long fallback = 1024) {
  const char* s = std::getenv("SPINLAB_PRECISION_CAP");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 2) return fallback;
  return v;
}

struct SquareClassTerm {
  Rational radicand;     // R
  Rational coefficient;  // C_R
};

struct ThetaResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Rational> exact;  // set for even r, or when Theta = 0 exactly
  Interval enclosure;
  long precision_bits = 0;
  std::size_t terms = 0;  // subsets with alpha V even
  std::vector<SquareClassTerm> classes;  // odd r only
  bool exactly_zero() const { return exact && *exact == 0; }
};

inline ThetaResult pgg_theta(const PsdEnsemble& ens, const PggInstance& inst, PrecisionPolicy policy = {}) {
  validate(inst, ens.n());
  const std::size_t m = inst.m(), n = inst.n();
  std::vector<Rational> x(n);
  auto P_at = [&](std::uint64_t mask) {
    auto a = inst.u + combine_rows(inst.V, mask, n);
    for (std::size_t j = 0; j < n; ++j) x[j] = a[j];
    return eval_P(ens, x);
  };
  const std::uint64_t full = (m == 0) ? 0 : ((1ULL << m) - 1);
  const std::uint64_t count = 1ULL << m;
  std::vector<Rational> Pcache(count);
  std::vector<bool> even(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    even[mask] = inst.rho.is_even(combine_rows(inst.V, mask, n));
    if (even[mask]) Pcache[mask] = P_at(mask);
  }

  ThetaResult res;
  // key K -> summed sign
  std::map<Rational, long, std::less<>> by_key;
  for (std::uint64_t alpha = 0; alpha < count; ++alpha) {
    if (!even[alpha]) continue;
    const std::uint64_t beta = full & ~alpha;
    int sign = 1;
    for (std::size_t i = 0; i < m; ++i)
      if (((beta >> i) & 1U) && inst.eps[i] < 0) sign = -sign;
    ++res.terms;
    by_key[Pcache[alpha] * Pcache[beta]] += sign;
  }
  for (const auto& [K, c] : by_key)
    if (K <= 0) throw std::domain_error("P vanished at a padded point; the ensemble sum is singular");

  const long r = inst.r;
  if (r % 2 == 0) {
    Rational theta = 0;
    for (const auto& [K, c] : by_key)
      if (c != 0) theta += Rational(c) / pow(K, r / 2);
    res.exact = theta;
    res.enclosure = Interval(theta, policy.start_bits);
    res.precision_bits = policy.start_bits;
    res.verdict = theta >= 0 ? Verdict::CertifiedNonnegative : Verdict::CertifiedNegative;
    return res;
  }

  // Odd r: square classes.
  for (const auto& [K, c] : by_key) {
    if (c == 0) continue;
    const Rational base = Rational(c) / pow(K, (r - 1) / 2);
    bool placed = false;
    for (auto& cls : res.classes) {
      Rational t;
      if (is_rational_square(Rational(K / cls.radicand), &t)) {
        cls.coefficient += base / t;  // K^{-1/2} = 1/(t sqrt(R))
        placed = true;
        break;
      }
    }
    if (!placed) res.classes.push_back({K, base});
  }
  std::erase_if(res.classes, [](const SquareClassTerm& c) { return c.coefficient == 0; });
  if (res.classes.empty()) {
    res.exact = Rational(0);
    res.enclosure = Interval(Rational(0), policy.start_bits);
    res.precision_bits = policy.start_bits;
    res.verdict = Verdict::CertifiedNonnegative;
    return res;
  }
  for (long bits = policy.start_bits;; bits *= 2) {
    if (bits > policy.cap_bits) bits = policy.cap_bits;
    Interval sum(Rational(0), bits);
    for (const auto& cls : res.classes) sum += Interval(cls.coefficient, bits) / Interval(cls.radicand, bits).sqrt();
    res.enclosure = sum;
    res.precision_bits = bits;
    if (sum.certainly_positive()) {
      res.verdict = Verdict::CertifiedNonnegative;
      return res;
    }
    if (sum.certainly_negative()) {
      res.verdict = Verdict::CertifiedNegative;
      return res;
    }
    if (bits >= policy.cap_bits) {
      res.verdict = Verdict::Inconclusive;
      return res;
    }
  }
}

}  // namespace spinlab::stabledet
