#pragma once

#include <spinlab/core/multi_index.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinlab {

/// Homomorphism rho: Z^n -> (Z/2Z)^L, stored as one packed column per basis
/// vector: bit k of column(j) is the k-th component of rho(e_j). L <= 64.
class ParityMap {
 public:
  static constexpr std::size_t max_targets = 64;

  /// The trivial map (L = 0) on n coordinates.
  explicit ParityMap(std::size_t n = 0) : n_(n), columns_(n, 0) {}

  ParityMap(std::size_t L, std::vector<std::uint64_t> columns) : L_(L), n_(columns.size()), columns_(std::move(columns)) {
    if (L_ > max_targets) throw std::invalid_argument("parity maps support at most 64 target bits");
    const std::uint64_t mask = L_ == 64 ? ~0ULL : ((1ULL << L_) - 1);
    for (auto c : columns_)
      if ((c & ~mask) != 0) throw std::invalid_argument("parity column has bits beyond L");
  }

  /// From L bit-rows of length n (the serialized form).
  static ParityMap from_rows(const std::vector<std::vector<int>>& rows, std::size_t n) {
    if (rows.size() > max_targets) throw std::invalid_argument("parity maps support at most 64 target bits");
    std::vector<std::uint64_t> cols(n, 0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].size() != n) throw std::invalid_argument("parity row length does not match n");
      for (std::size_t j = 0; j < n; ++j) {
        if (rows[k][j] != 0 && rows[k][j] != 1) throw std::invalid_argument("parity bits must be 0 or 1");
        if (rows[k][j]) cols[j] |= (1ULL << k);
      }
    }
    return ParityMap(rows.size(), std::move(cols));
  }

  std::size_t targets() const { return L_; }
  std::size_t dimension() const { return n_; }
  std::uint64_t column(std::size_t j) const { return columns_.at(j); }

  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> out(L_, std::vector<int>(n_, 0));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < L_; ++k) out[k][j] = static_cast<int>((columns_[j] >> k) & 1U);
    return out;
  }

  std::uint64_t apply(const MultiIndex& a) const {
    if (a.size() != n_) throw std::invalid_argument("multiindex length does not match parity map dimension");
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < n_; ++j)
      if (a[j] & 1) v ^= columns_[j];
    return v;
  }

  bool is_even(const MultiIndex& a) const { return apply(a) == 0; }

  friend bool operator==(const ParityMap&, const ParityMap&) = default;

 private:
  std::size_t L_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint64_t> columns_;
};

inline bool is_even(const ParityMap& rho, const MultiIndex& a) { return rho.is_even(a); }

}  // namespace spinlab
