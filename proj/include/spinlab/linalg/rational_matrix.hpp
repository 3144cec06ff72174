#pragma once

// Dense exact matrices: fraction-free determinants, rational LDL^T
// certification, and inversion.

#include <spinlab/core/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinlab {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Rational trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  RationalMatrix& operator+=(const RationalMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  RationalMatrix& operator*=(const Rational& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator*(RationalMatrix a, const Rational& s) { return a *= s; }
  friend RationalMatrix operator*(const Rational& s, RationalMatrix a) { return a *= s; }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  std::vector<std::vector<Rational>> to_rows() const {
    std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

 private:
  void require_same_shape(const RationalMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Bareiss fraction-free elimination on an n x n integer matrix (row-major,
/// consumed). Every intermediate division is exact.
inline BigInt bareiss_determinant(std::vector<BigInt> m, std::size_t n) {
  if (m.size() != n * n) throw std::invalid_argument("bareiss: matrix size mismatch");
  if (n == 0) return 1;
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * n + j]; };
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = std::move(v);
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  BigInt det = at(n - 1, n - 1);
  return sign < 0 ? BigInt(-det) : det;
}

/// Exact determinant: clear denominators with D = lcm, run Bareiss on the
/// integer matrix, divide by D^n.
inline Rational determinant(const RationalMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt d = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), a(i, j).get_den_mpz_t());
  std::vector<BigInt> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& v = a(i, j);
      BigInt scaled = d / v.get_den();
      m[i * n + j] = v.get_num() * scaled;
    }
  BigInt num = bareiss_determinant(std::move(m), n);
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), d.get_mpz_t(), n);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Result of symmetric-pivoted LDL^T on a rational symmetric matrix.
struct LdltCertificate {
  bool symmetric = false;
  bool positive_semidefinite = false;
  bool positive_definite = false;
  std::size_t rank = 0;
  std::vector<Rational> pivots;       // D entries in elimination order
  std::vector<std::size_t> permutation;  // pivot order of the original indices
};

/// A symmetric matrix is PSD iff the elimination never meets a negative
/// diagonal, and whenever every remaining diagonal entry is zero the whole
/// remaining block is zero.
inline LdltCertificate ldlt_certify(const RationalMatrix& a) {
  LdltCertificate cert;
  cert.symmetric = a.is_symmetric();
  if (!cert.symmetric) return cert;
  const std::size_t n = a.rows();
  RationalMatrix s = a;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k; i < n; ++i) {
      if (s(i, i) < 0) return cert;
      if (s(i, i) > s(best, best)) best = i;
    }
    if (s(best, best) == 0) {
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = k; j < n; ++j)
          if (s(i, j) != 0) return cert;
      cert.positive_semidefinite = true;
      cert.rank = k;
      for (std::size_t i = k; i < n; ++i) cert.pivots.push_back(0);
      cert.permutation = perm;
      return cert;
    }
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(s(k, j), s(best, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(s(i, k), s(i, best));
      std::swap(perm[k], perm[best]);
    }
    const Rational pivot = s(k, k);
    cert.pivots.push_back(pivot);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (s(i, k) == 0) continue;
      const Rational f = s(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) s(i, j) -= f * s(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      s(i, k) = 0;
      s(k, i) = 0;
    }
  }
  cert.positive_semidefinite = true;
  cert.positive_definite = true;
  cert.rank = n;
  cert.permutation = perm;
  return cert;
}

/// Gauss-Jordan inverse over Q; throws on a singular matrix.
inline RationalMatrix inverse(const RationalMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RationalMatrix m = a;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) throw std::domain_error("matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(k, j), m(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Rational p = m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) /= p;
      inv(k, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      const Rational f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace spinlab
