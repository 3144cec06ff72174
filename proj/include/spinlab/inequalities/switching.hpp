#pragma once

// Ising switching bijection for CGKS 2. K = K_1 u ... u K_m with |K_i| = gamma_i;
// {A} is the vector of intersection counts (|A n K_1|, ..., |A n K_m|).
// Correlations are 1{even}, so with C such that a+{C}V and b+{K\C}V are even,
// Psi(A) = K \ (A delta C) matches every right-hand term with an equal
// left-hand term.

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace spinlab::inequalities {

inline constexpr std::size_t max_switch_set = 20;

enum class SwitchVerdict { RhsZero, Verified, Failed };

inline const char* switch_verdict_name(SwitchVerdict v) {
  switch (v) {
    case SwitchVerdict::RhsZero: return "rhs_zero";
    case SwitchVerdict::Verified: return "verified";
    default: return "failed";
  }
}

struct SwitchReport {
  SwitchVerdict verdict = SwitchVerdict::Failed;
  std::optional<std::uint64_t> C;
  std::size_t K_size = 0;
  std::uint64_t subsets_checked = 0;
  bool involution = false;
  bool bijection = false;
  bool domination = false;
  long lhs_total = 0;  // sum over A of the left-hand products
  long rhs_total = 0;
};

namespace detail {

/// Block of each element of K.
inline std::vector<std::size_t> blocks(const MultiIndex& gamma) {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < gamma.size(); ++i) b.insert(b.end(), static_cast<std::size_t>(gamma[i]), i);
  return b;
}

inline MultiIndex counts(std::uint64_t A, const std::vector<std::size_t>& block, std::size_t m) {
  MultiIndex c(m);
  for (std::size_t k = 0; k < block.size(); ++k)
    if ((A >> k) & 1U) c.add_at(block[k], 1);
  return c;
}

}  // namespace detail

inline SwitchReport ising_switch_verify(const MultiIndex& gamma, const ExponentMatrix& V, const MultiIndex& a,
                                        const MultiIndex& b, const ParityMap& rho) {
  const std::size_t m = gamma.size();
  const std::size_t n = a.size();
  if (V.size() != m) throw std::invalid_argument("gamma length does not match the row count of V");
  if (b.size() != n || rho.dimension() != n) throw std::invalid_argument("a, b and rho dimensions disagree");
  for (const auto& row : V)
    if (row.size() != n) throw std::invalid_argument("row length mismatch in V");
  const auto block = detail::blocks(gamma);
  const std::size_t K = block.size();
  if (K > max_switch_set) throw std::invalid_argument("|K| exceeds 20");

  SwitchReport rep;
  rep.K_size = K;
  const std::uint64_t full = K == 0 ? 0 : ((1ULL << K) - 1);
  auto corr = [&](const MultiIndex& x) -> long { return rho.is_even(x) ? 1 : 0; };
  auto sV = [&](std::uint64_t A) {
    const MultiIndex c = detail::counts(A, block, m);
    return combine_rows(V, c.entries(), n);
  };

  for (std::uint64_t A = 0; A <= full; ++A) {
    rep.lhs_total += corr(a + b + sV(A)) * corr(sV(full & ~A));
    rep.rhs_total += corr(a + sV(A)) * corr(b + sV(full & ~A));
  }
  for (std::uint64_t C = 0; C <= full; ++C)
    if (rho.is_even(a + sV(C)) && rho.is_even(b + sV(full & ~C))) {
      rep.C = C;
      break;
    }
  if (!rep.C) {
    rep.verdict = rep.rhs_total == 0 ? SwitchVerdict::RhsZero : SwitchVerdict::Failed;
    rep.involution = rep.bijection = rep.domination = rep.rhs_total == 0;
    return rep;
  }
  const std::uint64_t C = *rep.C;
  auto psi = [&](std::uint64_t A) { return full & ~(A ^ C); };
  std::vector<bool> hit(static_cast<std::size_t>(full) + 1, false);
  rep.involution = rep.bijection = rep.domination = true;
  for (std::uint64_t A = 0; A <= full; ++A) {
    const std::uint64_t P = psi(A);
    if (psi(P) != A) rep.involution = false;
    if (hit[P]) rep.bijection = false;
    hit[P] = true;
    const long lhs = corr(a + b + sV(A)) * corr(sV(full & ~A));
    const long rhs = corr(a + sV(P)) * corr(b + sV(full & ~P));
    if (lhs < rhs) rep.domination = false;
    ++rep.subsets_checked;
  }
  rep.verdict = (rep.involution && rep.bijection && rep.domination) ? SwitchVerdict::Verified : SwitchVerdict::Failed;
  return rep;
}

}  // namespace spinlab::inequalities
