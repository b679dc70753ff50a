#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vlseq/error.hpp"

namespace vlseq {

/// 1-based sequence index.
using Index = std::uint64_t;

/// An exponent in (0, inf]. Infinity is a distinguished value with 1/inf = 0.
class Exponent {
 public:
  explicit Exponent(double value) : value_(value) {
    if (!(value > 0.0)) throw PreconditionError("exponent must lie in (0, inf], got " + std::to_string(value));
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(value_); }
  bool is_finite() const { return !is_infinite(); }
  double value() const { return value_; }
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / value_; }

  friend std::partial_ordering operator<=>(Exponent a, Exponent b) { return a.value_ <=> b.value_; }
  friend bool operator==(Exponent a, Exponent b) { return a.value_ == b.value_; }

  std::string str() const {
    if (is_infinite()) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

 private:
  double value_;
};

// ---------------------------------------------------------------------------
// Tail models: closed families describing p_n beyond the explicit prefix.
// ---------------------------------------------------------------------------

/// p_n = value for every tail index (value may be infinite).
struct ConstantTail {
  Exponent value;
};

/// p_n = slope * ln(n) + intercept, slope >= 0.
struct AffineLogTail {
  double slope;
  double intercept;
};

/// p_n = scale * n^power, scale > 0, power > 0.
struct PowerTail {
  double scale;
  double power;
};

using TailModel = std::variant<ConstantTail, AffineLogTail, PowerTail>;

inline TailModel infinite_tail() { return ConstantTail{Exponent::infinity()}; }

namespace detail {

enum class Family { constant, log, power, infinite };

// Canonical growth description: constant(a), log(a ln n + b, a > 0), power(a n^b).
struct Growth {
  Family family;
  double a = 0.0;
  double b = 0.0;

  double at(double n) const {
    switch (family) {
      case Family::constant: return a;
      case Family::log: return a * std::log(n) + b;
      case Family::power: return a * std::pow(n, b);
      case Family::infinite: return std::numeric_limits<double>::infinity();
    }
    return a;
  }
  bool unbounded() const { return family == Family::log || family == Family::power; }
};

inline Growth growth_of(const TailModel& tail) {
  return std::visit(
      [](const auto& t) -> Growth {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          if (t.value.is_infinite()) return {Family::infinite};
          return {Family::constant, t.value.value()};
        } else if constexpr (std::is_same_v<T, AffineLogTail>) {
          if (t.slope == 0.0) return {Family::constant, t.intercept};
          return {Family::log, t.slope, t.intercept};
        } else {
          return {Family::power, t.scale, t.power};
        }
      },
      tail);
}

inline void validate_tail(const TailModel& tail) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, AffineLogTail>) {
          require(std::isfinite(t.slope) && t.slope >= 0.0, "affine-log tail needs a finite slope >= 0");
          require(std::isfinite(t.intercept), "affine-log tail needs a finite intercept");
        } else if constexpr (std::is_same_v<T, PowerTail>) {
          require(std::isfinite(t.scale) && t.scale > 0.0, "power tail needs a finite scale > 0");
          require(std::isfinite(t.power) && t.power > 0.0, "power tail needs a finite power > 0");
        }
      },
      tail);
}

inline std::string describe(const TailModel& tail) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          if (t.value.is_infinite()) os << "infinite";
          else os << "constant " << t.value.value();
        } else if constexpr (std::is_same_v<T, AffineLogTail>) {
          os << "affine_log " << t.slope << ' ' << t.intercept;
        } else {
          os << "power " << t.scale << ' ' << t.power;
        }
      },
      tail);
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Finite description of an exponent sequence p_n in (0, inf]: an explicit
/// prefix for n = 1..len followed by a tail model, together with the
/// user-declared global infimum p_-.
class ExponentSequence {
 public:
  ExponentSequence(std::vector<Exponent> prefix, TailModel tail, Exponent declared_inf)
      : prefix_(std::move(prefix)), tail_(tail), declared_inf_(declared_inf) {
    detail::validate_tail(tail_);
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (!(prefix_[i] >= declared_inf_))
        throw PreconditionError("prefix value p_" + std::to_string(i + 1) + " = " + prefix_[i].str() +
                                " is below declared_inf " + declared_inf_.str());
    }
    const double tail_min = tail_infimum();
    detail::require(tail_min > 0.0, "tail model produces non-positive exponents");
    if (!(tail_min >= declared_inf_.value()))
      throw PreconditionError("tail model falls below declared_inf " + declared_inf_.str());
  }

  /// p_n = value for all n.
  static ExponentSequence constant(Exponent value) { return {{}, ConstantTail{value}, value}; }
  static ExponentSequence constant(double value) { return constant(Exponent(value)); }

  /// The given values followed by an all-infinite tail; declared_inf is their minimum.
  static ExponentSequence finite_prefix(std::vector<Exponent> values) {
    Exponent lowest = Exponent::infinity();
    for (auto e : values)
      if (e < lowest) lowest = e;
    return {std::move(values), infinite_tail(), lowest};
  }

  Exponent operator()(Index n) const { return eval(n); }

  Exponent eval(Index n) const {
    detail::require(n >= 1, "sequence indices start at 1");
    if (n <= prefix_.size()) return prefix_[n - 1];
    const double v = detail::growth_of(tail_).at(static_cast<double>(n));
    return v == std::numeric_limits<double>::infinity() ? Exponent::infinity() : Exponent(v);
  }

  std::size_t prefix_length() const { return prefix_.size(); }
  const std::vector<Exponent>& prefix() const { return prefix_; }
  const TailModel& tail() const { return tail_; }

  /// Declared p_-.
  Exponent inf() const { return declared_inf_; }

  /// p_+ from prefix and tail model.
  Exponent sup() const {
    const auto g = detail::growth_of(tail_);
    if (g.family != detail::Family::constant) return Exponent::infinity();
    Exponent best(g.a);
    for (auto e : prefix_)
      if (e > best) best = e;
    return best;
  }

  /// True when every index beyond prefix_length() carries the same exponent.
  bool constant_tail() const {
    const auto f = detail::growth_of(tail_).family;
    return f == detail::Family::constant || f == detail::Family::infinite;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "prefix=[";
    for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? " " : "") << prefix_[i].str();
    os << "] tail=" << detail::describe(tail_) << " declared_inf=" << declared_inf_.str();
    return os.str();
  }

 private:
  double tail_infimum() const {
    const double first = static_cast<double>(prefix_.size() + 1);
    return detail::growth_of(tail_).at(first);  // every family is nondecreasing in n
  }

  std::vector<Exponent> prefix_;
  TailModel tail_;
  Exponent declared_inf_;
};

/// r_n = 1 / |1/p_n - 1/q_n| with 1/inf = 0. Equals p_n when q_n = inf.
inline Exponent gap_reciprocal(Exponent pn, Exponent qn) {
  if (pn == qn) throw PreconditionError("gap undefined: p_n == q_n == " + pn.str());
  if (qn.is_infinite()) return pn;
  if (pn.is_infinite()) return qn;
  const double gap = std::abs(pn.reciprocal() - qn.reciprocal());
  if (gap == 0.0) return Exponent::infinity();
  return Exponent(1.0 / gap);
}

inline Exponent gap_reciprocal(const ExponentSequence& p, const ExponentSequence& q, Index n) {
  return gap_reciprocal(p(n), q(n));
}

// ---------------------------------------------------------------------------
// Index sets
// ---------------------------------------------------------------------------

/// What is known about an index set beyond its horizon.
enum class TailStatus { empty, cofinite, unknown };

inline const char* to_string(TailStatus s) {
  switch (s) {
    case TailStatus::empty: return "empty";
    case TailStatus::cofinite: return "cofinite";
    case TailStatus::unknown: return "unknown";
  }
  return "unknown";
}

/// Predicate-backed set of indices. Beyond horizon() the set is either empty or
/// contains every index, as recorded by tail_status(); unknown means the
/// horizon could not be certified.
class IndexSet {
 public:
  IndexSet(std::function<bool(Index)> predicate, Index horizon, TailStatus tail)
      : predicate_(std::move(predicate)), horizon_(horizon), tail_(tail) {}

  static IndexSet empty() {
    return {[](Index) { return false; }, 0, TailStatus::empty};
  }
  static IndexSet all() {
    return {[](Index) { return true; }, 0, TailStatus::cofinite};
  }
  static IndexSet of(std::vector<Index> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const Index horizon = members.empty() ? 0 : members.back();
    return {[m = std::move(members)](Index n) { return std::binary_search(m.begin(), m.end(), n); }, horizon,
            TailStatus::empty};
  }
  static IndexSet range(Index first, Index last) {
    return {[first, last](Index n) { return n >= first && n <= last; }, last, TailStatus::empty};
  }

  bool contains(Index n) const { return predicate_(n); }
  Index horizon() const { return horizon_; }
  TailStatus tail_status() const { return tail_; }
  bool is_finite() const { return tail_ == TailStatus::empty; }

  /// Sorted members in 1..D.
  std::vector<Index> enumerate(Index D) const {
    std::vector<Index> out;
    for (Index n = 1; n <= D; ++n)
      if (predicate_(n)) out.push_back(n);
    return out;
  }

  IndexSet intersect(const IndexSet& other) const {
    TailStatus t = TailStatus::unknown;
    if (tail_ == TailStatus::empty || other.tail_ == TailStatus::empty) t = TailStatus::empty;
    else if (tail_ == TailStatus::cofinite && other.tail_ == TailStatus::cofinite) t = TailStatus::cofinite;
    return {[a = predicate_, b = other.predicate_](Index n) { return a(n) && b(n); },
            std::max(horizon_, other.horizon_), t};
  }

  IndexSet minus(const IndexSet& other) const {
    TailStatus t = TailStatus::unknown;
    if (tail_ == TailStatus::empty || other.tail_ == TailStatus::cofinite) t = TailStatus::empty;
    else if (tail_ == TailStatus::cofinite && other.tail_ == TailStatus::empty) t = TailStatus::cofinite;
    return {[a = predicate_, b = other.predicate_](Index n) { return a(n) && !b(n); },
            std::max(horizon_, other.horizon_), t};
  }

  /// True when the set is certified to have no member at all.
  bool certainly_empty() const {
    if (tail_ != TailStatus::empty) return false;
    for (Index n = 1; n <= horizon_; ++n)
      if (predicate_(n)) return false;
    return true;
  }

 private:
  std::function<bool(Index)> predicate_;
  Index horizon_;
  TailStatus tail_;
};

// ---------------------------------------------------------------------------
// Eventual ordering of two tail models
// ---------------------------------------------------------------------------

/// Past `settle`, sign(y_n - x_n) is constantly `sign`. `resolved` is false
/// when the crossing point could not be located below the search limit.
struct EventualOrder {
  int sign = 0;
  Index settle = 0;
  bool resolved = true;
};

namespace detail {

inline constexpr Index search_limit = Index{1} << 53;

inline int family_rank(Family f) {
  switch (f) {
    case Family::constant: return 0;
    case Family::log: return 1;
    case Family::power: return 2;
    case Family::infinite: return 3;
  }
  return 0;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// First n >= lo with h(n) > 0, for h nondecreasing on [lo, inf).
template <class F>
std::optional<Index> first_positive(F&& h, Index lo, Index limit) {
  if (lo > limit) return std::nullopt;
  if (h(lo) > 0.0) return lo;
  Index step = 1;
  Index hi = 0;
  for (;;) {
    const Index next = (limit - lo < step) ? limit : lo + step;
    if (h(next) > 0.0) {
      hi = next;
      break;
    }
    if (next == limit) return std::nullopt;
    lo = next;
    step *= 2;
  }
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (h(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

inline Index ceil_index(double v) {
  if (!(v > 1.0)) return 1;
  if (v >= static_cast<double>(search_limit)) return search_limit;
  return static_cast<Index>(std::ceil(v));
}

}  // namespace detail

/// Eventual sign of y_n - x_n over indices n > start, both given by tail models.
inline EventualOrder eventual_order(const TailModel& x, const TailModel& y, Index start) {
  using detail::Family;
  const auto gx = detail::growth_of(x);
  const auto gy = detail::growth_of(y);

  const int rx = detail::family_rank(gx.family);
  const int ry = detail::family_rank(gy.family);

  int sign = 0;
  if (rx != ry) {
    sign = ry > rx ? 1 : -1;
  } else {
    switch (gx.family) {
      case Family::infinite: return {0, start, true};
      case Family::constant: return {detail::sign_of(gy.a - gx.a), start, true};
      case Family::log:
        sign = gy.a != gx.a ? detail::sign_of(gy.a - gx.a) : detail::sign_of(gy.b - gx.b);
        break;
      case Family::power:
        sign = gy.b != gx.b ? detail::sign_of(gy.b - gx.b) : detail::sign_of(gy.a - gx.a);
        break;
    }
    if (sign == 0) return {0, start, true};
  }

  if (gx.family == Family::infinite || gy.family == Family::infinite) return {sign, start, true};

  const auto& dom = sign > 0 ? gy : gx;
  const auto& sub = sign > 0 ? gx : gy;

  // Index from which dom - sub is nondecreasing.
  double mono = 1.0;
  if (dom.family == Family::power && sub.family == Family::log) {
    mono = std::pow(sub.a / (dom.a * dom.b), 1.0 / dom.b);
  } else if (dom.family == Family::power && sub.family == Family::power && dom.b != sub.b) {
    mono = std::pow(sub.a * sub.b / (dom.a * dom.b), 1.0 / (dom.b - sub.b));
  }

  const Index lo = std::max<Index>(start + 1, detail::ceil_index(mono));
  auto h = [&](Index n) {
    const double nn = static_cast<double>(n);
    return dom.at(nn) - sub.at(nn);
  };
  const auto first = detail::first_positive(h, lo, detail::search_limit);
  if (!first) return {sign, detail::search_limit, false};
  return {sign, std::max(start, *first - 1), true};
}

/// Relation between two exponent sequences: past horizon the ordering of
/// p_n and q_n is fixed and equals sign(q_n - p_n) = tail_sign.
struct PairAnalysis {
  Index horizon = 0;
  int tail_sign = 0;
  bool resolved = true;
};

/// Default largest horizon that is walked index by index.
inline constexpr Index default_enumeration_cap = 10'000'000;

inline PairAnalysis analyze_pair(const ExponentSequence& p, const ExponentSequence& q,
                                 Index cap = default_enumeration_cap) {
  const Index start = std::max<Index>(p.prefix_length(), q.prefix_length());
  const auto order = eventual_order(p.tail(), q.tail(), start);
  return {order.settle, order.sign, order.resolved && order.settle <= cap};
}

enum class Comparison { less, greater, unequal };

/// Indices with p_n < q_n (less), p_n > q_n (greater) or p_n != q_n (unequal),
/// with the tail of the set classified from the tail models.
inline IndexSet difference_set(const ExponentSequence& p, const ExponentSequence& q, Comparison mode,
                               Index cap = default_enumeration_cap) {
  const auto pa = analyze_pair(p, q, cap);
  TailStatus tail = TailStatus::unknown;
  if (pa.resolved) {
    bool in = false;
    switch (mode) {
      case Comparison::less: in = pa.tail_sign > 0; break;
      case Comparison::greater: in = pa.tail_sign < 0; break;
      case Comparison::unequal: in = pa.tail_sign != 0; break;
    }
    tail = in ? TailStatus::cofinite : TailStatus::empty;
  }
  auto pred = [p, q, mode](Index n) {
    const Exponent pn = p(n), qn = q(n);
    switch (mode) {
      case Comparison::less: return pn < qn;
      case Comparison::greater: return pn > qn;
      case Comparison::unequal: return !(pn == qn);
    }
    return false;
  };
  return {pred, pa.horizon, tail};
}

/// The finite-exponent indices F_p = {n : p_n < inf}.
inline IndexSet finite_indices(const ExponentSequence& p) {
  const bool infinite_tail = detail::growth_of(p.tail()).family == detail::Family::infinite;
  const TailStatus tail = infinite_tail ? TailStatus::empty : TailStatus::cofinite;
  return {[p](Index n) { return p(n).is_finite(); }, p.prefix_length(), tail};
}

}  // namespace vlseq
