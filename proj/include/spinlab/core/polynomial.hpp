#pragma once

#include <spinlab/core/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab {

/// Sparse multivariate polynomial over a fixed number of variables.
/// Terms with zero coefficient are never stored.
template <class Coeff>
class SparsePolynomial {
 public:
  using Exponent = std::vector<std::uint32_t>;
  using TermMap = std::map<Exponent, Coeff>;

  explicit SparsePolynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static SparsePolynomial constant(std::size_t nvars, const Coeff& c) {
    SparsePolynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }
  static SparsePolynomial variable(std::size_t nvars, std::size_t j) {
    SparsePolynomial p(nvars);
    Exponent e(nvars, 0);
    e.at(j) = 1;
    p.add_term(e, Coeff(1));
    return p;
  }

  std::size_t variable_count() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Coeff& c) {
    if (e.size() != nvars_) throw std::invalid_argument("exponent length does not match variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Coeff coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  SparsePolynomial& operator+=(const SparsePolynomial& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SparsePolynomial& operator-=(const SparsePolynomial& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  SparsePolynomial& operator*=(const Coeff& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator*(SparsePolynomial a, const Coeff& s) { return a *= s; }
  friend SparsePolynomial operator*(const Coeff& s, SparsePolynomial a) { return a *= s; }

  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
    a.require_compatible(b);
    SparsePolynomial out(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }
  SparsePolynomial& operator*=(const SparsePolynomial& b) { return *this = *this * b; }

  SparsePolynomial derivative(std::size_t j) const {
    if (j >= nvars_) throw std::out_of_range("derivative variable out of range");
    SparsePolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[j] == 0) continue;
      Exponent d = e;
      d[j] -= 1;
      out.add_term(d, c * Coeff(e[j]));
    }
    return out;
  }

  /// Sets x_j := value and keeps the variable slot (now absent from every term).
  SparsePolynomial substitute(std::size_t j, const Coeff& value) const {
    SparsePolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponent d = e;
      d[j] = 0;
      Coeff f = c;
      for (std::uint32_t k = 0; k < e[j]; ++k) f *= value;
      out.add_term(d, f);
    }
    return out;
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluation point has the wrong length");
    T total(0);
    for (const auto& [e, c] : terms_) {
      T term(c);
      for (std::size_t k = 0; k < nvars_; ++k)
        for (std::uint32_t r = 0; r < e[k]; ++r) term *= x[k];
      total += term;
    }
    return total;
  }
  template <class T>
  T evaluate(const std::vector<T>& x) const {
    return evaluate(std::span<const T>(x));
  }

  std::uint32_t degree_in(std::size_t j) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(j));
    return d;
  }
  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
      std::uint32_t s = 0;
      for (auto k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }
  bool is_multiaffine() const {
    for (std::size_t j = 0; j < nvars_; ++j)
      if (degree_in(j) > 1) return false;
    return true;
  }

  /// Readable form using x1, x2, ... (1-based).
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    // Highest exponents first reads more naturally.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string coeff = spinlab_coeff_string(c);
      bool negative = !coeff.empty() && coeff.front() == '-';
      if (negative) coeff.erase(0, 1);
      if (!first) s += negative ? " - " : " + ";
      else if (negative) s += "-";
      first = false;
      std::string mono;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(k + 1);
        if (e[k] > 1) mono += "^" + std::to_string(e[k]);
      }
      if (mono.empty()) s += coeff;
      else if (coeff == "1") s += mono;
      else s += coeff + "*" + mono;
    }
    return s;
  }

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  static std::string spinlab_coeff_string(const Coeff& c) {
    if constexpr (std::is_same_v<Coeff, Rational>) return c.get_str();
    else return std::to_string(c);
  }
  void require_compatible(const SparsePolynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials over different variable counts");
  }

  std::size_t nvars_;
  TermMap terms_;
};

using Polynomial = SparsePolynomial<Rational>;

}  // namespace spinlab
