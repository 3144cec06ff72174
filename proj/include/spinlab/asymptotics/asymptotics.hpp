#pragma once

// ratio(lambda) = <O^{lambda m}> / predicted(lambda), where
//   O(N):   predicted = c^{p-1} lambda^{-(p-1)(N-1)/2} K(m)^{-(N-1)/2},
//           c = 2^{(N-1)/2} Gamma(N/2) / sqrt(pi);
//   CP^{N-1}: predicted = Gamma(N)^{p-1} lambda^{-(p-1)(N-1)} K(m)^{-(N-1)}.
// For O(N) with N odd, c = (N-2)!! and everything is rational. For N even,
// c = 2^{(N-2)/2} (N/2-1)! sqrt(2/pi) and the irrational parts live in intervals.

#include <spinlab/core/interval.hpp>
#include <spinlab/core/rational.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/moments/moments.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab::asymptotics {

inline constexpr long default_precision_bits = 256;

struct RatioPoint {
  long lambda = 1;
  bool even = true;
  std::optional<Rational> exact;      // <O^{lambda m}> when kept exactly
  Interval exact_enclosure;
  std::optional<Rational> predicted;  // when rational
  Interval predicted_enclosure;
  std::optional<Rational> ratio;
  Interval ratio_enclosure;
};

struct AsymptoticsReport {
  moments::Model model = moments::Model::ON;
  long N = 1;
  WeightedGraph graph{2};
  Rational kirchhoff_value;
  std::string prefactor;  // human-readable form of c^{p-1}
  Interval prefactor_enclosure;
  std::vector<RatioPoint> points;
};

namespace detail {

/// Exact moment at lambda m, or only an enclosure when the rational is huge.
struct ExactValue {
  std::optional<Rational> value;
  Interval enclosure;
};

inline ExactValue on_exact(const WeightedGraph& g, long N, long lambda, long bits,
                           const moments::EliminationOptions& opt) {
  const std::size_t p = g.vertex_count();
  ExactValue out;
  if (p == 2) {
    const long x = lambda * g.weight(0, 1) / 2;
    if (N % 2 == 1) {
      // (2x-1)!!(N-2)!!/(2x+N-2)!! = (N-2)!! / ((2x+1)(2x+3)...(2x+N-2))
      BigInt den = 1;
      for (long k = 2 * x + 1; k <= 2 * x + N - 2; k += 2) den *= BigInt(k);
      Rational v(double_factorial(N - 2), den);
      v.canonicalize();
      out.value = v;
      out.enclosure = Interval(v, bits);
    } else {
      BigInt num, den;
      // x >= 1: an even connected pair has weight >= 2
      mpz_2fac_ui(num.get_mpz_t(), static_cast<unsigned long>(2 * x - 1));
      num *= double_factorial(N - 2);
      mpz_2fac_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * x + N - 2));
      if (mpz_sizeinbase(den.get_mpz_t(), 2) < 4096) {
        Rational v(num, den);
        v.canonicalize();
        out.value = v;
      }
      out.enclosure = Interval(num, den, bits);
    }
    return out;
  }
  Rational v = moments::on_moment(g.scaled(lambda), N, opt).value;
  out.enclosure = Interval(v, bits);
  out.value = std::move(v);
  return out;
}

inline ExactValue cpn_exact(const WeightedGraph& g, long N, long lambda, long bits,
                            const moments::EliminationOptions& opt) {
  ExactValue out;
  Rational v;
  if (g.vertex_count() == 2) {
    // (N-1)! / ((M+1)(M+2)...(M+N-1)), M = lambda m
    const long M = lambda * g.weight(0, 1);
    BigInt den = 1;
    for (long k = M + 1; k <= M + N - 1; ++k) den *= BigInt(k);
    v = Rational(factorial(static_cast<unsigned long>(N - 1)), den);
    v.canonicalize();
  } else {
    v = moments::cpn_moment(g.scaled(lambda), N, opt).value;
  }
  out.enclosure = Interval(v, bits);
  out.value = std::move(v);
  return out;
}

inline void fill_ratio(RatioPoint& pt) {
  if (pt.exact && pt.predicted) {
    pt.ratio = *pt.exact / *pt.predicted;
    pt.ratio_enclosure = Interval(*pt.ratio, pt.exact_enclosure.precision());
  } else {
    pt.ratio_enclosure = pt.exact_enclosure / pt.predicted_enclosure;
  }
}

inline void check_lambdas(const std::vector<long>& lambdas) {
  for (auto l : lambdas)
    if (l < 1) throw std::invalid_argument("lambda values must be positive integers");
}

}  // namespace detail

inline AsymptoticsReport on_ratio(const WeightedGraph& g, long N, const std::vector<long>& lambdas,
                                  long bits = default_precision_bits, const moments::EliminationOptions& opt = {}) {
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  if (!g.is_connected()) throw std::invalid_argument("graph must be connected");
  if (!g.is_even()) throw std::invalid_argument("graph must be even (all degrees even)");
  detail::check_lambdas(lambdas);
  const std::size_t p = g.vertex_count();
  const long pm1 = static_cast<long>(p) - 1;

  AsymptoticsReport rep;
  rep.model = moments::Model::ON;
  rep.N = N;
  rep.graph = g;
  rep.kirchhoff_value = kirchhoff::kirchhoff_matrix_tree(g, kirchhoff::weights_as_point(g)).value;
  const Rational& K = rep.kirchhoff_value;

  // rational part of the prediction (without lambda), and whether sqrt(2/pi)^{p-1},
  // sqrt(K) remain.
  Rational c_rat;
  if (N % 2 == 1) {
    c_rat = Rational(double_factorial(N - 2));
    rep.prefactor = "((N-2)!!)^(p-1) = " + pow(c_rat, pm1).get_str();
  } else {
    BigInt two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>((N - 2) / 2));
    c_rat = Rational(two_pow * factorial(static_cast<unsigned long>(N / 2 - 1)));
    rep.prefactor = "(" + c_rat.get_str() + " * sqrt(2/pi))^(p-1)";
  }
  Interval c_int(c_rat, bits);
  if (N % 2 == 0) c_int = c_int * (Interval(Rational(2), bits) / Interval::pi(bits)).sqrt();
  rep.prefactor_enclosure = c_int.pow(pm1);

  const long twice_exp = pm1 * (N - 1);  // 2 * (p-1)(N-1)/2
  for (long lambda : lambdas) {
    RatioPoint pt;
    pt.lambda = lambda;
    pt.even = g.scaled(lambda).is_even();
    auto ex = detail::on_exact(g, N, lambda, bits, opt);
    pt.exact = ex.value;
    pt.exact_enclosure = ex.enclosure;
    // lambda^{-twice_exp/2} K^{-(N-1)/2}
    Rational rat = pow(c_rat, pm1) * pow(Rational(lambda), -(twice_exp / 2));
    bool irrational = N % 2 == 0;
    Interval pred(rat, bits);
    if (N % 2 == 1) {
      rat *= pow(K, -(N - 1) / 2);
      pred = Interval(rat, bits);
    } else {
      pred = Interval(rat * pow(K, -(N - 2) / 2), bits) / Interval(K, bits).sqrt();
      pred = pred * (Interval(Rational(2), bits) / Interval::pi(bits)).sqrt().pow(pm1);
    }
    if (twice_exp % 2 != 0) {
      irrational = true;
      pred = pred / Interval(Rational(lambda), bits).sqrt();
    }
    if (!irrational) pt.predicted = rat;
    pt.predicted_enclosure = pred;
    detail::fill_ratio(pt);
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

inline AsymptoticsReport cpn_ratio(const WeightedGraph& g, long N, const std::vector<long>& lambdas,
                                   long bits = default_precision_bits, const moments::EliminationOptions& opt = {}) {
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  if (!g.is_connected()) throw std::invalid_argument("graph must be connected");
  detail::check_lambdas(lambdas);
  const long pm1 = static_cast<long>(g.vertex_count()) - 1;

  AsymptoticsReport rep;
  rep.model = moments::Model::CPN;
  rep.N = N;
  rep.graph = g;
  rep.kirchhoff_value = kirchhoff::kirchhoff_matrix_tree(g, kirchhoff::weights_as_point(g)).value;
  const Rational gammaN(factorial(static_cast<unsigned long>(N - 1)));
  const Rational pref = pow(gammaN, pm1);
  rep.prefactor = "Gamma(N)^(p-1) = " + pref.get_str();
  rep.prefactor_enclosure = Interval(pref, bits);

  for (long lambda : lambdas) {
    RatioPoint pt;
    pt.lambda = lambda;
    auto ex = detail::cpn_exact(g, N, lambda, bits, opt);
    pt.exact = ex.value;
    pt.exact_enclosure = ex.enclosure;
    Rational pred = pref * pow(Rational(lambda), -pm1 * (N - 1)) * pow(rep.kirchhoff_value, -(N - 1));
    pt.predicted = pred;
    pt.predicted_enclosure = Interval(pred, bits);
    detail::fill_ratio(pt);
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

}  // namespace spinlab::asymptotics
