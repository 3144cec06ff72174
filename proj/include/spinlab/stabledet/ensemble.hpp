#pragma once

// PSD ensembles A_1..A_n and the determinantal polynomial
// P(x) = det(sum_j x_j A_j).

#include <spinlab/core/polynomial.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/linalg/rational_matrix.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::stabledet {

class PsdEnsemble {
 public:
  PsdEnsemble() = default;

  /// Validates: every A_j square q x q, symmetric, PSD; sum_j A_j PD.
  explicit PsdEnsemble(std::vector<RationalMatrix> matrices) : mats_(std::move(matrices)) {
    if (mats_.empty()) throw std::invalid_argument("ensemble needs at least one matrix");
    q_ = mats_[0].rows();
    if (q_ == 0) throw std::invalid_argument("ensemble matrices must be nonempty");
    RationalMatrix sum(q_, q_);
    for (std::size_t j = 0; j < mats_.size(); ++j) {
      const auto& a = mats_[j];
      if (a.rows() != q_ || a.cols() != q_)
        throw std::invalid_argument("matrix " + std::to_string(j + 1) + " is not " + std::to_string(q_) + "x" +
                                    std::to_string(q_));
      auto cert = ldlt_certify(a);
      if (!cert.symmetric) throw std::invalid_argument("matrix " + std::to_string(j + 1) + " is not symmetric");
      if (!cert.positive_semidefinite)
        throw std::invalid_argument("matrix " + std::to_string(j + 1) + " is not positive semidefinite");
      sum += a;
    }
    if (!ldlt_certify(sum).positive_definite)
      throw std::invalid_argument("sum of ensemble matrices is not positive definite");
  }

  std::size_t q() const { return q_; }
  std::size_t n() const { return mats_.size(); }
  const RationalMatrix& matrix(std::size_t j) const { return mats_.at(j); }
  const std::vector<RationalMatrix>& matrices() const { return mats_; }

  /// sum_j x_j A_j.
  RationalMatrix combination(const std::vector<Rational>& x) const {
    if (x.size() != n()) throw std::invalid_argument("point length " + std::to_string(x.size()) +
                                                     " does not match ensemble size " + std::to_string(n()));
    RationalMatrix s(q_, q_);
    for (std::size_t j = 0; j < n(); ++j) {
      if (x[j] == 0) continue;
      s += mats_[j] * x[j];
    }
    return s;
  }

 private:
  std::size_t q_ = 0;
  std::vector<RationalMatrix> mats_;
};

/// P(x) = det(sum_j x_j A_j), exact.
inline Rational eval_P(const PsdEnsemble& ens, const std::vector<Rational>& x) {
  return determinant(ens.combination(x));
}

/// P as a polynomial in x_1..x_n. Subset DP over columns: D[S] is the
/// minor on the first |S| rows and the columns in S.
inline Polynomial symbolic_P(const PsdEnsemble& ens) {
  const std::size_t q = ens.q();
  const std::size_t n = ens.n();
  if (q > 16) throw std::invalid_argument("symbolic determinant limited to q <= 16");
  std::vector<std::vector<Polynomial>> entry(q, std::vector<Polynomial>(q, Polynomial(n)));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& v = ens.matrix(k)(i, j);
        if (v != 0) entry[i][j] += Polynomial::variable(n, k) * v;
      }
  const std::uint32_t full = (1U << q);
  std::vector<Polynomial> D(full, Polynomial(n));
  D[0] = Polynomial::constant(n, Rational(1));
  for (std::uint32_t S = 1; S < full; ++S) {
    const std::size_t row = static_cast<std::size_t>(std::popcount(S)) - 1;
    Polynomial acc(n);
    for (std::size_t c = 0; c < q; ++c) {
      if (!((S >> c) & 1U)) continue;
      if (entry[row][c].is_zero() || D[S & ~(1U << c)].is_zero()) continue;
      const int above = std::popcount(S >> (c + 1));
      Polynomial term = entry[row][c] * D[S & ~(1U << c)];
      if (above & 1) acc -= term;
      else acc += term;
    }
    D[S] = std::move(acc);
  }
  return D[full - 1];
}

}  // namespace spinlab::stabledet
