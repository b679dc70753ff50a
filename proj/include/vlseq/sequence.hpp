#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"

namespace vlseq {

/// Real sequence supported on indices 1..D. Storage is 0-based: entry i holds a_{i+1}.
class FiniteSequence {
 public:
  explicit FiniteSequence(std::vector<double> values) : values_(std::move(values)) {
    detail::require(!values_.empty(), "a finite sequence needs dimension D >= 1");
    for (double v : values_) detail::require(std::isfinite(v), "sequence entries must be finite reals");
  }
  FiniteSequence(std::initializer_list<double> values) : FiniteSequence(std::vector<double>(values)) {}

  static FiniteSequence zeros(std::size_t D) { return FiniteSequence(std::vector<double>(D, 0.0)); }
  static FiniteSequence unit(std::size_t D, Index n) {
    auto s = zeros(D);
    s.values_.at(n - 1) = 1.0;
    return s;
  }

  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  /// a_n for 1-based n; zero outside 1..D.
  double at_index(Index n) const { return (n >= 1 && n <= values_.size()) ? values_[n - 1] : 0.0; }

  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  FiniteSequence& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  friend FiniteSequence operator*(double s, FiniteSequence a) { return a *= s; }
  friend FiniteSequence operator*(FiniteSequence a, double s) { return a *= s; }
  friend FiniteSequence operator/(FiniteSequence a, double s) { return a *= (1.0 / s); }

  friend FiniteSequence operator+(const FiniteSequence& a, const FiniteSequence& b) { return combine(a, b, 1.0); }
  friend FiniteSequence operator-(const FiniteSequence& a, const FiniteSequence& b) { return combine(a, b, -1.0); }

  /// Zero outside `keep` (restriction a * chi_keep).
  FiniteSequence restricted(const IndexSet& keep) const {
    auto out = *this;
    for (std::size_t i = 0; i < out.values_.size(); ++i)
      if (!keep.contains(i + 1)) out.values_[i] = 0.0;
    return out;
  }

 private:
  static FiniteSequence combine(const FiniteSequence& a, const FiniteSequence& b, double sign) {
    std::vector<double> out(std::max(a.dimension(), b.dimension()), 0.0);
    for (std::size_t i = 0; i < a.dimension(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.dimension(); ++i) out[i] += sign * b[i];
    return FiniteSequence(std::move(out));
  }

  std::vector<double> values_;
};

/// A maximal run of equal entries a_first = ... = a_{first+length-1} = value.
/// Positions and lengths are doubles so that runs far beyond 2^64 can be
/// represented; positions above 2^53 are approximate.
struct Run {
  double first;
  double length;
  double value;

  double last() const { return first + length - 1.0; }
};

/// Run-length encoded sequence. Multi-entry runs are only created where the
/// relevant exponent sequences are constant, so sums over a run close in form.
class RunSequence {
 public:
  RunSequence() = default;

  void append(Run r) {
    detail::require(r.length >= 1.0 && std::isfinite(r.value), "runs need length >= 1 and a finite value");
    runs_.push_back(r);
  }

  const std::vector<Run>& runs() const { return runs_; }
  bool empty() const { return runs_.empty(); }

  /// Last occupied index (0 when empty).
  double extent() const { return runs_.empty() ? 0.0 : runs_.back().last(); }

  RunSequence scaled(double s) const {
    RunSequence out = *this;
    for (auto& r : out.runs_) r.value *= s;
    return out;
  }

  /// Dense copy; requires the extent to fit `max_dimension`.
  FiniteSequence to_dense(std::size_t max_dimension = 50'000'000) const {
    detail::require(extent() >= 1.0 && extent() <= static_cast<double>(max_dimension),
                    "run sequence too long to expand densely");
    std::vector<double> values(static_cast<std::size_t>(extent()), 0.0);
    for (const auto& r : runs_) {
      const auto first = static_cast<std::size_t>(r.first);
      const auto len = static_cast<std::size_t>(r.length);
      std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(first - 1), len, r.value);
    }
    return FiniteSequence(std::move(values));
  }

  static RunSequence from_dense(const FiniteSequence& a) {
    RunSequence out;
    for (std::size_t i = 0; i < a.dimension(); ++i)
      if (a[i] != 0.0) out.append({static_cast<double>(i + 1), 1.0, a[i]});
    return out;
  }

 private:
  std::vector<Run> runs_;
};

}  // namespace vlseq
