#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "vlseq/detail/parallel.hpp"
#include "vlseq/detail/random.hpp"
#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/norms.hpp"

namespace vlseq {

enum class TailVerdict { convergent, divergent, undecided };

inline const char* to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::convergent: return "convergent";
    case TailVerdict::divergent: return "divergent";
    case TailVerdict::undecided: return "undecided";
  }
  return "undecided";
}

/// Outcome of sum_{n in A} c^{r_n}, r_n = 1/(1/p_n - 1/q_n).
struct CriterionResult {
  double c = 0.5;
  double partial_sum = 0.0;  // over n in A, n <= D
  TailVerdict tail_verdict = TailVerdict::undecided;
  std::optional<double> M;  // certified upper bound of the full sum when convergent
  Index summed_through = 0;  // explicit summation reached this index
};

namespace detail {

// Growth of r_n on the cofinite part of {p_n < q_n}.
struct GapTail {
  enum class Kind { bounded, log, power } kind;
  bool exact;     // r_n equals the majorant (q_n = inf) rather than dominating it
  Growth growth;  // lower envelope of r_n when kind != bounded
};

inline GapTail gap_tail(const ExponentSequence& p, const ExponentSequence& q) {
  const auto gp = growth_of(p.tail());
  const auto gq = growth_of(q.tail());
  const bool exact = gq.family == Family::infinite;
  switch (gp.family) {
    case Family::log: return {GapTail::Kind::log, exact, gp};
    case Family::power: return {GapTail::Kind::power, exact, gp};
    default: return {GapTail::Kind::bounded, true, gp};
  }
}

// Upper bound of sum_{n > N} c^{g(n)} for log or power growth g, N >= 1.
inline std::optional<double> tail_sum_bound(const Growth& g, double c, Index N) {
  const double nn = static_cast<double>(std::max<Index>(N, 1));
  const double lc = std::log(c);
  if (g.family == Family::log) {
    // c^{a ln n + b} = c^b n^{-s}; sum_{n>N} n^{-s} <= N^{1-s}/(s-1).
    const double s = -g.a * lc;
    if (s <= 1.0) return std::nullopt;
    return std::exp(g.b * lc) * std::pow(nn, 1.0 - s) / (s - 1.0);
  }
  if (g.family == Family::power) {
    const double kappa = -g.a * lc;
    const double gamma = g.b;
    if (gamma >= 1.0) {
      // (n+1)^gamma - n^gamma >= gamma N^{gamma-1}: geometric majorant.
      const double ratio = std::exp(-kappa * gamma * std::pow(nn, gamma - 1.0));
      const double first = std::exp(-kappa * std::pow(nn + 1.0, gamma));
      return first / (1.0 - ratio);
    }
    // integral of exp(-kappa x^gamma) over [N, inf)
    return boost::math::tgamma(1.0 / gamma, kappa * std::pow(nn, gamma)) / (gamma * std::pow(kappa, 1.0 / gamma));
  }
  return std::nullopt;
}

}  // namespace detail

/// Partial sum of the criterion over A up to D plus a tail verdict and, when
/// convergent, a certified total M.
inline CriterionResult criterion_sum(const ExponentSequence& p, const ExponentSequence& q, double c, const IndexSet& A,
                                     Index D, Index cap = default_enumeration_cap) {
  detail::require(c > 0.0 && c < 1.0, "criterion constant c must lie in (0, 1)");
  CriterionResult out;
  out.c = c;

  // N: last index summed explicitly; the tail certificate (if any) starts after it.
  Index N = std::max<Index>(D, A.horizon());
  std::optional<detail::GapTail> tail;
  bool certifiable = A.tail_status() == TailStatus::empty;
  if (A.tail_status() == TailStatus::cofinite) {
    const auto pa = analyze_pair(p, q, cap);
    detail::require(!pa.resolved || pa.tail_sign > 0, "criterion set is cofinite but p_n >= q_n eventually");
    if (pa.resolved) {
      N = std::max({N, pa.horizon, Index{1}});
      tail = detail::gap_tail(p, q);
      certifiable = true;
    }
  }
  if (N > cap) certifiable = false;
  if (!certifiable) N = D;

  double total = 0.0;
  for (Index n = 1; n <= N; ++n) {
    if (!A.contains(n)) continue;
    const Exponent pn = p(n), qn = q(n);
    if (!(pn < qn)) throw PreconditionError("criterion set contains n = " + std::to_string(n) + " with p_n >= q_n");
    const Exponent r = gap_reciprocal(pn, qn);
    const double term = r.is_infinite() ? 0.0 : std::pow(c, r.value());
    total += term;
    if (n <= D) out.partial_sum += term;
  }
  out.summed_through = N;
  if (!certifiable) return out;

  if (!tail) {
    out.tail_verdict = TailVerdict::convergent;
    out.M = total;
  } else if (tail->kind == detail::GapTail::Kind::bounded) {
    out.tail_verdict = TailVerdict::divergent;
  } else if (auto bound = detail::tail_sum_bound(tail->growth, c, N)) {
    out.tail_verdict = TailVerdict::convergent;
    out.M = total + *bound;
  } else {
    out.tail_verdict = tail->exact ? TailVerdict::divergent : TailVerdict::undecided;
  }
  return out;
}

/// Answer to "is there 0 < c < 1 with sum_{n in A} c^{r_n} < inf?".
struct ExistsC {
  enum class Answer { yes, no, undecided } answer = Answer::undecided;
  double c = 0.0;  // certified constant when yes
  double M = 0.0;  // certified sum bound when yes
};

inline const char* to_string(ExistsC::Answer a) {
  switch (a) {
    case ExistsC::Answer::yes: return "yes";
    case ExistsC::Answer::no: return "no";
    case ExistsC::Answer::undecided: return "undecided";
  }
  return "undecided";
}

inline ExistsC exists_c(const ExponentSequence& p, const ExponentSequence& q, const IndexSet& A,
                        Index cap = default_enumeration_cap) {
  double c = 0.5;
  switch (A.tail_status()) {
    case TailStatus::unknown: return {};
    case TailStatus::empty: break;
    case TailStatus::cofinite: {
      const auto pa = analyze_pair(p, q, cap);
      if (!pa.resolved) return {};
      const auto tail = detail::gap_tail(p, q);
      if (tail.kind == detail::GapTail::Kind::bounded) return {ExistsC::Answer::no};
      if (tail.kind == detail::GapTail::Kind::log) c = std::exp(-2.0 / tail.growth.a);
      break;
    }
  }
  if (A.horizon() > cap) return {};
  const auto res = criterion_sum(p, q, c, A, std::max<Index>(A.horizon(), 1), cap);
  if (res.tail_verdict != TailVerdict::convergent || !res.M) return {};
  return {ExistsC::Answer::yes, c, *res.M};
}

// ---------------------------------------------------------------------------

/// l_{p_n} against l_inf.
struct LinftyRelation {
  enum class Kind { coincides, distinct, undecided } kind = Kind::undecided;
  double lower = 1.0;  // ||a||_inf <= lower * ||a||_p
  double upper = 0.0;  // ||a||_p <= upper * ||a||_inf
  double c = 0.0;
  double M = 0.0;
};

inline LinftyRelation linfty_relation(const ExponentSequence& p, Index cap = default_enumeration_cap) {
  const auto q = ExponentSequence::constant(Exponent::infinity());
  const auto F = finite_indices(p);
  if (F.certainly_empty()) return {LinftyRelation::Kind::coincides, 1.0, 1.0, 1.0, 0.0};
  const auto e = exists_c(p, q, F, cap);
  switch (e.answer) {
    case ExistsC::Answer::yes:
      return {LinftyRelation::Kind::coincides, 1.0,
              std::pow(std::max(1.0, e.M), p.inf().reciprocal()) / e.c, e.c, e.M};
    case ExistsC::Answer::no: return {LinftyRelation::Kind::distinct};
    default: return {};
  }
}

enum class Regime { finite_q, mixed_q, general };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::finite_q: return "finite_q";
    case Regime::mixed_q: return "mixed_q";
    case Regime::general: return "general";
  }
  return "general";
}

/// Upper bound for the norm of l_q -> l_p given a convergent criterion (c, M).
/// p_minus is the infimum of the target exponents.
inline double embedding_constant(Regime regime, double c, double M, Exponent p_minus) {
  detail::require(c > 0.0 && c < 1.0, "embedding constant needs 0 < c < 1");
  detail::require(M >= 0.0, "embedding constant needs M >= 0");
  const double inv = p_minus.reciprocal();
  const double R = std::pow(std::max(1.0, M), inv) / c;
  const double two = std::pow(2.0, inv);
  switch (regime) {
    case Regime::finite_q: return 4.0 * R;
    case Regime::mixed_q: return 5.0 * two * R;
    case Regime::general: return two * ((5.0 * two + 1.0) * R + 1.0);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

/// Decision for one direction l_source -> l_target.
struct DirectionVerdict {
  enum class Status { holds, fails, undecided } status = Status::undecided;
  double constant_bound = 1.0;
  Regime regime = Regime::general;
  ExistsC criterion{};
  std::string witness;  // refuting construction when the embedding fails
  std::string note;
};

inline const char* to_string(DirectionVerdict::Status s) {
  switch (s) {
    case DirectionVerdict::Status::holds: return "holds";
    case DirectionVerdict::Status::fails: return "fails";
    case DirectionVerdict::Status::undecided: return "undecided";
  }
  return "undecided";
}

/// Does l_source embed into l_target? Decided on {n : target_n < source_n}.
inline DirectionVerdict decide_embedding(const ExponentSequence& source, const ExponentSequence& target,
                                         Index cap = default_enumeration_cap) {
  DirectionVerdict v;
  const auto drop = difference_set(target, source, Comparison::less, cap);
  if (drop.tail_status() == TailStatus::unknown) {
    v.note = "exponent crossing lies beyond the enumeration cap";
    return v;
  }
  if (drop.certainly_empty()) {
    v.status = DirectionVerdict::Status::holds;
    v.note = "target exponents dominate pointwise";
    // An infinite target exponent over a finite source one enters the modular
    // as |a_n| instead of |a_n|^{p_n}; scaling by lambda splits the mass 1/2 + 1/2.
    if (!finite_indices(source).minus(finite_indices(target)).certainly_empty()) {
      v.constant_bound = std::pow(2.0, std::max(1.0, target.inf().reciprocal()));
      v.note += "; infinite target exponents over finite source ones";
    }
    return v;
  }
  v.criterion = exists_c(target, source, drop, cap);
  switch (v.criterion.answer) {
    case ExistsC::Answer::yes: {
      const auto rest = IndexSet::all().minus(drop);
      if (rest.certainly_empty()) v.regime = source.sup().is_finite() ? Regime::finite_q : Regime::mixed_q;
      v.constant_bound = embedding_constant(v.regime, v.criterion.c, v.criterion.M, target.inf());
      v.status = DirectionVerdict::Status::holds;
      break;
    }
    case ExistsC::Answer::no: {
      v.status = DirectionVerdict::Status::fails;
      const auto finite_src = finite_indices(source);
      const auto I = exists_c(target, source, drop.intersect(finite_src), cap);
      const auto J = exists_c(target, source, drop.minus(finite_src), cap);
      if (I.answer == ExistsC::Answer::no) v.witness = "block witness on the finite-exponent part of the drop set";
      else if (J.answer == ExistsC::Answer::no) v.witness = "all-ones witness where the source exponent is infinite";
      else v.witness = "criterion diverges; branch not certified";
      break;
    }
    case ExistsC::Answer::undecided: v.note = "criterion tail undecided"; break;
  }
  return v;
}

enum class PairClass { equivalent, strict_forward, strict_backward, incomparable, undecided };

inline const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::equivalent: return "equivalent";
    case PairClass::strict_forward: return "strict_forward";
    case PairClass::strict_backward: return "strict_backward";
    case PairClass::incomparable: return "incomparable";
    case PairClass::undecided: return "undecided";
  }
  return "undecided";
}

struct EmbeddingVerdict {
  DirectionVerdict forward;   // l_p -> l_q
  DirectionVerdict backward;  // l_q -> l_p
  PairClass classification = PairClass::undecided;
};

inline PairClass compose(const DirectionVerdict& forward, const DirectionVerdict& backward) {
  using S = DirectionVerdict::Status;
  if (forward.status == S::undecided || backward.status == S::undecided) return PairClass::undecided;
  if (forward.status == S::holds && backward.status == S::holds) return PairClass::equivalent;
  if (forward.status == S::holds) return PairClass::strict_forward;
  if (backward.status == S::holds) return PairClass::strict_backward;
  return PairClass::incomparable;
}

inline EmbeddingVerdict classify_pair(const ExponentSequence& p, const ExponentSequence& q,
                                      Index cap = default_enumeration_cap) {
  EmbeddingVerdict v{decide_embedding(p, q, cap), decide_embedding(q, p, cap)};
  v.classification = compose(v.forward, v.backward);
  return v;
}

struct EmpiricalCheck {
  double max_ratio = 0.0;
  bool within_bound = true;
};

/// max over random sequences of ||a||_p / ||a||_q, compared with `bound`.
inline EmpiricalCheck verify_embedding_empirically(const ExponentSequence& p, const ExponentSequence& q, double bound,
                                                   std::size_t samples, std::size_t D, std::uint64_t seed,
                                                   NormOptions opts = {}) {
  detail::require(samples >= 1, "need at least one sample");
  detail::require(D >= 1, "need D >= 1");
  const auto ratios = detail::parallel_map(samples, [&](std::size_t i) {
    auto rng = detail::stream_rng(seed, i);
    const auto a = detail::random_sequence(rng, D);
    return luxemburg_norm(a, p, opts) / luxemburg_norm(a, q, opts);
  });
  EmpiricalCheck out;
  for (double r : ratios) out.max_ratio = std::max(out.max_ratio, r);
  out.within_bound = out.max_ratio <= bound * (1.0 + 1e-9);
  return out;
}

}  // namespace vlseq
