#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/sequence.hpp"

namespace vlseq {

/// |x|^p with 0^p = 0 and the convention that p = inf never reaches here.
inline double abs_pow(double x, double p) {
  x = std::abs(x);
  if (x == 0.0) return 0.0;
  return std::pow(x, p);
}

/// Bisection settings for the Luxemburg quasi-norm.
struct NormOptions {
  double tolerance = 1e-12;  // relative, on lambda
  int max_iterations = 200;
};

/// Exponent sequence bundled with its bisection settings.
struct NormContext {
  ExponentSequence p;
  NormOptions options{};

  /// T in ||a+b|| <= T (||a|| + ||b||).
  double quasi_triangle_constant() const {
    return std::max(1.0, std::pow(2.0, p.inf().reciprocal() - 1.0));
  }
};

inline double quasi_triangle_constant(const ExponentSequence& p) { return NormContext{p}.quasi_triangle_constant(); }

namespace detail {

// m(a / lambda)
inline double scaled_modular(const FiniteSequence& a, const ExponentSequence& p, double lambda) {
  double sum = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const double v = a[i] / lambda;
    const Exponent e = p(i + 1);
    if (e.is_infinite()) sup = std::max(sup, std::abs(v));
    else sum += abs_pow(v, e.value());
  }
  return sum + sup;
}

}  // namespace detail

/// m_p(a) = sum over finite-exponent indices of |a_n|^{p_n} + sup over the others.
inline double modular(const FiniteSequence& a, const ExponentSequence& p) {
  return detail::scaled_modular(a, p, 1.0);
}

/// Modular of a run-length sequence; each multi-entry run must sit where p is constant.
inline double modular(const RunSequence& a, const ExponentSequence& p, double scale = 1.0) {
  double sum = 0.0;
  double sup = 0.0;
  for (const auto& r : a.runs()) {
    detail::require(r.length == 1.0 || (p.constant_tail() && r.first > static_cast<double>(p.prefix_length())),
                    "run crosses a non-constant exponent region");
    const bool in_tail = r.first > static_cast<double>(p.prefix_length());
    const Exponent e = (in_tail && p.constant_tail()) ? p(p.prefix_length() + 1) : p(static_cast<Index>(r.first));
    const double v = r.value / scale;
    if (e.is_infinite()) sup = std::max(sup, std::abs(v));
    else sum += r.length * abs_pow(v, e.value());
  }
  return sum + sup;
}

inline double sup_norm(const FiniteSequence& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// ||a||_p = inf{lambda > 0 : m_p(a / lambda) <= 1}, by geometric bisection on
/// the bracket [||a||_inf, ||a||_inf * N^{max(1, 1/p_-)}] where N counts the
/// nonzero entries.
inline double luxemburg_norm(const FiniteSequence& a, const ExponentSequence& p, NormOptions opts = {}) {
  detail::require(opts.tolerance > 0.0, "bisection tolerance must be positive");
  const double s = sup_norm(a);
  if (s == 0.0) return 0.0;

  // Below s the largest entry alone pushes the modular above 1.
  double lo = s;
  if (detail::scaled_modular(a, p, lo) <= 1.0) return lo;

  const auto support =
      static_cast<double>(std::count_if(a.values().begin(), a.values().end(), [](double v) { return v != 0.0; }));
  double hi = s * std::pow(support, std::max(1.0, p.inf().reciprocal()));
  while (detail::scaled_modular(a, p, hi) > 1.0) hi *= 2.0;

  for (int it = 0; it < opts.max_iterations && hi / lo - 1.0 > opts.tolerance; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (detail::scaled_modular(a, p, mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double luxemburg_norm(const FiniteSequence& a, const NormContext& ctx) {
  return luxemburg_norm(a, ctx.p, ctx.options);
}

/// e' with 1/e + 1/e' = 1.
inline Exponent conjugate(Exponent e) {
  if (!(e.value() >= 1.0)) throw PreconditionError("conjugate exponent needs e >= 1, got " + e.str());
  if (e.is_infinite()) return Exponent(1.0);
  if (e.value() == 1.0) return Exponent::infinity();
  return Exponent(e.value() / (e.value() - 1.0));
}

struct HolderCheck {
  double pairing;
  double bound;
  bool satisfied;
};

/// sum |a_n b_n| against 4 ||a||_r ||b||_{r'}.
inline HolderCheck holder_pairing(const FiniteSequence& a, const FiniteSequence& b, const ExponentSequence& r,
                                  double tolerance = 1e-9, NormOptions opts = {}) {
  const std::size_t D = std::max(a.dimension(), b.dimension());
  std::vector<Exponent> rv, rc;
  rv.reserve(D);
  rc.reserve(D);
  for (Index n = 1; n <= D; ++n) {
    const Exponent e = r(n);
    if (!(e.value() >= 1.0))
      throw PreconditionError("Hoelder pairing needs r_n >= 1; r_" + std::to_string(n) + " = " + e.str());
    rv.push_back(e);
    rc.push_back(conjugate(e));
  }
  double pairing = 0.0;
  for (Index n = 1; n <= D; ++n) pairing += std::abs(a.at_index(n) * b.at_index(n));

  auto pad = [D](const FiniteSequence& x) {
    std::vector<double> v(D, 0.0);
    std::copy(x.values().begin(), x.values().end(), v.begin());
    return FiniteSequence(std::move(v));
  };
  const double bound = 4.0 * luxemburg_norm(pad(a), ExponentSequence::finite_prefix(rv), opts) *
                       luxemburg_norm(pad(b), ExponentSequence::finite_prefix(rc), opts);
  return {pairing, bound, pairing <= bound * (1.0 + tolerance)};
}

}  // namespace vlseq
