#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab {

/// Exponent vector a in N^n. Entries are kept nonnegative by every mutator.
class MultiIndex {
 public:
  using value_type = long;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : entries_(n, 0) {}
  MultiIndex(std::initializer_list<long> values) : entries_(values) { check(); }
  explicit MultiIndex(std::vector<long> values) : entries_(std::move(values)) { check(); }

  static MultiIndex unit(std::size_t n, std::size_t j, long value = 1) {
    MultiIndex a(n);
    a.set(j, value);
    return a;
  }

  std::size_t size() const { return entries_.size(); }
  long operator[](std::size_t j) const { return entries_[j]; }
  std::span<const long> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void set(std::size_t j, long value) {
    if (value < 0) throw std::invalid_argument("multiindex entries must be nonnegative");
    entries_.at(j) = value;
  }
  void add_at(std::size_t j, long delta) { set(j, entries_.at(j) + delta); }

  /// |a| = a_1 + ... + a_n.
  long length() const { return std::accumulate(entries_.begin(), entries_.end(), 0L); }
  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](long v) { return v == 0; });
  }

  MultiIndex scaled(long lambda) const {
    if (lambda < 0) throw std::invalid_argument("dilation factor must be nonnegative");
    MultiIndex out(*this);
    for (auto& v : out.entries_) v *= lambda;
    return out;
  }

  MultiIndex& operator+=(const MultiIndex& other) {
    require_same_size(other);
    for (std::size_t j = 0; j < size(); ++j) entries_[j] += other.entries_[j];
    return *this;
  }
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }

  /// Componentwise difference; throws if any entry would go negative.
  MultiIndex minus(const MultiIndex& other) const {
    require_same_size(other);
    MultiIndex out(size());
    for (std::size_t j = 0; j < size(); ++j) out.set(j, entries_[j] - other.entries_[j]);
    return out;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < size(); ++j) {
      if (j) s += ",";
      s += std::to_string(entries_[j]);
    }
    return s + ")";
  }

 private:
  void check() const {
    for (long v : entries_)
      if (v < 0) throw std::invalid_argument("multiindex entries must be nonnegative");
  }
  void require_same_size(const MultiIndex& other) const {
    if (other.size() != size()) throw std::invalid_argument("multiindex length mismatch");
  }

  std::vector<long> entries_;
};

/// Rows of an m x n nonnegative-integer matrix (V in the coupling notation).
using ExponentMatrix = std::vector<MultiIndex>;

/// alpha V for a row vector alpha of length m.
inline MultiIndex combine_rows(const ExponentMatrix& rows, std::span<const long> alpha, std::size_t n) {
  if (alpha.size() != rows.size()) throw std::invalid_argument("coefficient count does not match row count");
  MultiIndex out(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (alpha[i] == 0) continue;
    if (rows[i].size() != n) throw std::invalid_argument("row length mismatch");
    out += rows[i].scaled(alpha[i]);
  }
  return out;
}

/// Sum of the rows selected by bit i of `mask`.
inline MultiIndex combine_rows(const ExponentMatrix& rows, std::uint64_t mask, std::size_t n) {
  MultiIndex out(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if ((mask >> i) & 1U) {
      if (rows[i].size() != n) throw std::invalid_argument("row length mismatch");
      out += rows[i];
    }
  }
  return out;
}

/// 1_m V.
inline MultiIndex row_sum(const ExponentMatrix& rows, std::size_t n) {
  MultiIndex out(n);
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("row length mismatch");
    out += r;
  }
  return out;
}

}  // namespace spinlab
