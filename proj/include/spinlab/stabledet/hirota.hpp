#pragma once

// (L, L)_a for L = P^{-eta}: (d_x - d_y)^a L(x) L(y) at y = x.
// With d^b(P^{-eta}) = P^{-eta-|b|} Q_b,
//   (L, L)_a = P^{-2 eta - |a|} S,  S = sum_{b+c=a} C(a,b) (-1)^{|c|} Q_b Q_c,
// so sign(S) = sign((L, L)_a) wherever P > 0.

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/polynomial.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/stabledet/ensemble.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::stabledet {

inline constexpr long hirota_degree_cap = 6;

class HirotaProbe {
 public:
  HirotaProbe(Polynomial P, Rational eta) : P_(std::move(P)), eta_(std::move(eta)) {
    if (eta_ <= 0) throw std::invalid_argument("eta must be positive");
    for (std::size_t j = 0; j < P_.variable_count(); ++j) dP_.push_back(P_.derivative(j));
  }
  HirotaProbe(const PsdEnsemble& ens, Rational eta) : HirotaProbe(symbolic_P(ens), std::move(eta)) {}

  std::size_t n() const { return P_.variable_count(); }
  const Polynomial& P() const { return P_; }
  const Rational& eta() const { return eta_; }

  /// Q_b, built by peeling the first nonzero index of b:
  /// Q_b = P d_j Q_{b'} - (eta + |b'|) Q_{b'} d_j P.
  const Polynomial& Q(const MultiIndex& b) {
    if (b.size() != n()) throw std::invalid_argument("multiindex length does not match variable count");
    auto it = memo_.find(b);
    if (it != memo_.end()) return it->second;
    if (b.is_zero()) return memo_.emplace(b, Polynomial::constant(n(), Rational(1))).first->second;
    std::size_t j = 0;
    while (b[j] == 0) ++j;
    MultiIndex prev = b;
    prev.add_at(j, -1);
    const Polynomial& q = Q(prev);
    Polynomial next = P_ * q.derivative(j) - (q * dP_[j]) * (eta_ + Rational(prev.length()));
    return memo_.emplace(b, std::move(next)).first->second;
  }

  /// The sign carrier S(x, eta). No parity restriction here (odd |a| gives 0).
  Rational sign_carrier(const MultiIndex& a, const std::vector<Rational>& x) {
    if (a.size() != n()) throw std::invalid_argument("multiindex length does not match variable count");
    if (x.size() != n()) throw std::invalid_argument("point length does not match variable count");
    if (P_.evaluate(x) == 0) throw std::domain_error("P vanishes at the evaluation point");
    std::map<MultiIndex, Rational> value;
    auto val = [&](const MultiIndex& b) -> const Rational& {
      auto it = value.find(b);
      if (it != value.end()) return it->second;
      return value.emplace(b, Q(b).evaluate(x)).first->second;
    };
    Rational S = 0;
    MultiIndex b(n());
    auto rec = [&](auto&& self, std::size_t j, BigInt coeff) -> void {
      if (j == n()) {
        MultiIndex c = a.minus(b);
        Rational term = Rational(coeff) * val(b) * val(c);
        if (c.length() & 1) S -= term;
        else S += term;
        return;
      }
      for (long bj = 0; bj <= a[j]; ++bj) {
        b.set(j, bj);
        self(self, j + 1, coeff * binomial(a[j], bj));
      }
      b.set(j, 0);
    };
    rec(rec, 0, BigInt(1));
    return S;
  }

 private:
  Polynomial P_;
  Rational eta_;
  std::vector<Polynomial> dP_;
  std::map<MultiIndex, Polynomial> memo_;
};

/// Public probe: |a| even and at most 6; x strictly positive.
inline Rational hirota_probe(const PsdEnsemble& ens, const MultiIndex& a, const std::vector<Rational>& x,
                             const Rational& eta) {
  if (a.length() % 2 != 0) throw std::invalid_argument("|a| must be even");
  if (a.length() > hirota_degree_cap) throw std::invalid_argument("|a| exceeds the Hirota degree cap 6");
  for (const auto& v : x)
    if (v <= 0) throw std::invalid_argument("x must be strictly positive");
  HirotaProbe probe(ens, eta);
  return probe.sign_carrier(a, x);
}

}  // namespace spinlab::stabledet
