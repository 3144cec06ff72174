#pragma once

#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/moments/moments.hpp>

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::inequalities {

/// a -> <O^a> for one model, with the parity map that governs its vanishing.
class CorrelationOracle {
 public:
  enum class Kind { ON, CPN, TABLE };
  using Fn = std::function<Rational(const MultiIndex&)>;

  CorrelationOracle(Kind kind, long N, std::size_t p, ParityMap rho, Fn fn)
      : kind_(kind), N_(N), p_(p), rho_(std::move(rho)), fn_(std::move(fn)) {}

  /// O(N) on p sites; observables are the pairs i<j in lexicographic order.
  static CorrelationOracle on(std::size_t p, long N, moments::EliminationOptions opt = {}) {
    if (N < 1) throw std::invalid_argument("N must be a positive integer");
    auto rho = on_parity_map(p);
    Fn fn = [p, N, rho, opt](const MultiIndex& a) -> Rational {
      if (!rho.is_even(a)) return 0;
      if (N == 1) return 1;  // Ising: indicator of evenness
      return moments::on_moment(WeightedGraph::from_pair_exponents(p, a), N, opt).value;
    };
    return CorrelationOracle(Kind::ON, N, p, rho, std::move(fn));
  }

  static CorrelationOracle ising(std::size_t p) { return on(p, 1); }

  /// CP^{N-1}; the parity map is trivial.
  static CorrelationOracle cpn(std::size_t p, long N, moments::EliminationOptions opt = {}) {
    if (N < 1) throw std::invalid_argument("N must be a positive integer");
    Fn fn = [p, N, opt](const MultiIndex& a) -> Rational {
      if (N == 1) return 1;
      return moments::cpn_moment(WeightedGraph::from_pair_exponents(p, a), N, opt).value;
    };
    return CorrelationOracle(Kind::CPN, N, p, ParityMap(pair_count(p)), std::move(fn));
  }

  /// Explicit table; missing exponents are an error.
  static CorrelationOracle table(std::map<MultiIndex, Rational> values, ParityMap rho) {
    auto shared = std::make_shared<const std::map<MultiIndex, Rational>>(std::move(values));
    Fn fn = [shared](const MultiIndex& a) -> Rational {
      auto it = shared->find(a);
      if (it == shared->end()) throw std::out_of_range("exponent " + a.to_string() + " not in the correlation table");
      return it->second;
    };
    return CorrelationOracle(Kind::TABLE, 0, 0, std::move(rho), std::move(fn));
  }

  /// Dense precomputation of `base` on {0..max_entry}^n; other exponents fall
  /// through to `base`. Keeps kind/N/p of the base oracle.
  static CorrelationOracle tabulate(const CorrelationOracle& base, long max_entry) {
    const std::size_t n = base.dimension();
    const std::size_t side = static_cast<std::size_t>(max_entry + 1);
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) {
      total *= side;
      if (total > 50'000'000) throw std::invalid_argument("dense correlation table too large");
    }
    auto values = std::make_shared<std::vector<Rational>>(total);
    MultiIndex a(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t r = idx;
      for (std::size_t j = 0; j < n; ++j) {
        a.set(j, static_cast<long>(r % side));
        r /= side;
      }
      (*values)[idx] = base(a);
    }
    Fn fallback = base.fn_;
    Fn fn = [values, side, n, max_entry, fallback](const MultiIndex& a) -> Rational {
      std::size_t idx = 0, scale = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (a[j] > max_entry) return fallback(a);
        idx += static_cast<std::size_t>(a[j]) * scale;
        scale *= side;
      }
      return (*values)[idx];
    };
    return CorrelationOracle(base.kind_, base.N_, base.p_, base.rho_, std::move(fn));
  }

  Rational operator()(const MultiIndex& a) const {
    if (a.size() != rho_.dimension())
      throw std::invalid_argument("exponent length " + std::to_string(a.size()) + " does not match oracle dimension " +
                                  std::to_string(rho_.dimension()));
    return fn_(a);
  }

  Kind kind() const { return kind_; }
  long N() const { return N_; }
  std::size_t p() const { return p_; }
  std::size_t dimension() const { return rho_.dimension(); }
  const ParityMap& parity() const { return rho_; }

  std::string model_name() const {
    switch (kind_) {
      case Kind::ON: return "ON";
      case Kind::CPN: return "CPN";
      default: return "TABLE";
    }
  }

 private:
  Kind kind_;
  long N_;
  std::size_t p_;
  ParityMap rho_;
  Fn fn_;
};

}  // namespace spinlab::inequalities
