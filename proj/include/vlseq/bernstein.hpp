#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vlseq/detail/optimize.hpp"
#include "vlseq/detail/random.hpp"
#include "vlseq/embedding.hpp"
#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/norms.hpp"
#include "vlseq/sequence.hpp"

namespace vlseq {

/// b_n(id: l_p -> l_q) = n^{1/q - 1/p} for constants p < q.
inline double classical_bernstein(Exponent p, Exponent q, Index n) {
  detail::require(p < q, "classical Bernstein numbers need p < q");
  detail::require(n >= 1, "n must be at least 1");
  return std::pow(static_cast<double>(n), q.reciprocal() - p.reciprocal());
}

struct BernsteinBounds {
  double alpha = 0.0;  // inf (q_n - p_n)
  double p_plus = 0.0;
  double q_plus = 0.0;
  double theorem_exponent = 0.0;  // alpha / ((q_+ - alpha) q_+)
  double proof_exponent = 0.0;    // alpha / (p_+ q_+)

  double theorem_bound(Index n) const { return std::pow(static_cast<double>(n), -theorem_exponent); }
  double proof_bound(Index n) const { return std::pow(static_cast<double>(n), -proof_exponent); }
};

/// Certified alpha = inf (q_n - p_n) and the two decay exponents.
inline BernsteinBounds bernstein_bounds(const ExponentSequence& p, const ExponentSequence& q) {
  const Exponent qp = q.sup();
  detail::require(qp.is_finite(), "upper bound needs q_+ < inf");
  detail::require(p.constant_tail(), "upper bound needs q_n - p_n bounded below; p grows without bound");
  const Index horizon = std::max<Index>(p.prefix_length(), q.prefix_length()) + 1;
  double alpha = std::numeric_limits<double>::infinity();
  for (Index n = 1; n <= horizon; ++n) alpha = std::min(alpha, q(n).value() - p(n).value());
  detail::require(alpha > 0.0, "upper bound needs inf (q_n - p_n) > 0");
  BernsteinBounds b;
  b.alpha = alpha;
  b.p_plus = p.sup().value();
  b.q_plus = qp.value();
  b.theorem_exponent = alpha / ((b.q_plus - alpha) * b.q_plus);
  b.proof_exponent = alpha / (b.p_plus * b.q_plus);
  return b;
}

/// (theorem bound, proof bound) at dimension n.
inline std::pair<double, double> upper_bound(const ExponentSequence& p, const ExponentSequence& q, Index n) {
  detail::require(n >= 1, "n must be at least 1");
  const auto b = bernstein_bounds(p, q);
  return {b.theorem_bound(n), b.proof_bound(n)};
}

namespace detail {

inline std::size_t common_dimension(const std::vector<FiniteSequence>& basis) {
  std::size_t D = 0;
  for (const auto& b : basis) D = std::max(D, b.dimension());
  return D;
}

inline Eigen::MatrixXd as_columns(const std::vector<FiniteSequence>& basis) {
  const auto D = common_dimension(basis);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < basis[j].dimension(); ++i)
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = basis[j][i];
  return B;
}

inline FiniteSequence to_sequence(const Eigen::VectorXd& v) {
  return FiniteSequence(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace detail

/// #{i : |x_i| >= (1 - tol) max |x|}.
inline std::size_t flat_count(const FiniteSequence& x, double tol = 1e-8) {
  double m = 0.0;
  for (double v : x.values()) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(x.values().begin(), x.values().end(), [&](double v) { return std::abs(v) >= (1.0 - tol) * m; }));
}

struct FlatVectorOptions {
  double flat_tol = 1e-8;
  std::size_t enumeration_limit = 8;  // largest n that is enumerated
  std::size_t max_candidates = 5'000'000;
  std::uint64_t seed = 0;
};

namespace detail {

// Solve x_{k_i} = s_i on the span and accept if no coordinate exceeds 1.
inline std::optional<Eigen::VectorXd> flat_candidate(const Eigen::MatrixXd& B, const std::vector<Eigen::Index>& rows,
                                                     const Eigen::VectorXd& signs, double tol) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd S(n, B.cols());
  for (Eigen::Index i = 0; i < n; ++i) S.row(i) = B.row(rows[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd x = B * lu.solve(signs);
  if (x.cwiseAbs().maxCoeff() > 1.0 + tol) return std::nullopt;
  return x;
}

}  // namespace detail

/// Nonzero x in span(basis) whose largest modulus is attained at >= n
/// coordinates (n = basis size). Small n enumerates coordinate subsets and
/// sign patterns; otherwise a multistart penalty search proposes the active
/// set, which is then solved exactly.
inline FiniteSequence flat_vector(const std::vector<FiniteSequence>& basis, const FlatVectorOptions& opt = {}) {
  detail::require(!basis.empty(), "flat_vector needs a nonempty basis");
  const Eigen::MatrixXd B = detail::as_columns(basis);
  const auto D = B.rows();
  const auto n = B.cols();
  detail::require(D >= n, "basis has more vectors than coordinates");
  detail::require(Eigen::FullPivLU<Eigen::MatrixXd>(B).rank() == n, "flat_vector basis is linearly dependent");

  auto accept = [&](const Eigen::VectorXd& x) -> std::optional<FiniteSequence> {
    auto s = detail::to_sequence(x);
    if (flat_count(s, opt.flat_tol) >= static_cast<std::size_t>(n)) return s;
    return std::nullopt;
  };

  if (static_cast<std::size_t>(n) <= opt.enumeration_limit) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    std::size_t tried = 0;
    const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
    while (tried < opt.max_candidates) {
      for (std::uint64_t mask = 0; mask < patterns; ++mask, ++tried) {
        Eigen::VectorXd signs = Eigen::VectorXd::Ones(n);
        for (Eigen::Index i = 1; i < n; ++i)
          if (mask >> (i - 1) & 1U) signs(i) = -1.0;
        if (auto x = detail::flat_candidate(B, rows, signs, opt.flat_tol))
          if (auto s = accept(*x)) return *s;
      }
      // next subset in lexicographic order
      Eigen::Index i = n - 1;
      while (i >= 0 && rows[static_cast<std::size_t>(i)] == D - n + i) --i;
      if (i < 0) break;
      ++rows[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < n; ++j)
        rows[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  // Penalty: relative shortfall of the n largest moduli from the maximum.
  auto deficiency = [&](const detail::Point& beta) {
    Eigen::VectorXd x = B * Eigen::Map<const Eigen::VectorXd>(beta.data(), n);
    std::vector<double> mags(x.data(), x.data() + x.size());
    for (auto& m : mags) m = std::abs(m);
    std::partial_sort(mags.begin(), mags.begin() + n, mags.end(), std::greater<>());
    if (mags[0] == 0.0) return static_cast<double>(n);
    double d = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) d += 1.0 - mags[static_cast<std::size_t>(i)] / mags[0];
    return d;
  };
  detail::SearchOptions sopt;
  sopt.starts = 64;
  const auto best = detail::multistart_minimize(
      deficiency, [&](std::mt19937_64& rng) { return detail::random_unit_point(rng, static_cast<std::size_t>(n)); },
      detail::normalize_euclidean, sopt, opt.seed);
  Eigen::VectorXd x = B * Eigen::Map<const Eigen::VectorXd>(best.x.data(), n);
  if (auto s = accept(x)) return *s;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(D));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(x(a)) > std::abs(x(b)); });
  std::vector<Eigen::Index> rows(order.begin(), order.begin() + n);
  Eigen::VectorXd signs(n);
  for (Eigen::Index i = 0; i < n; ++i) signs(i) = x(rows[static_cast<std::size_t>(i)]) >= 0.0 ? 1.0 : -1.0;
  if (auto y = detail::flat_candidate(B, rows, signs, opt.flat_tol))
    if (auto s = accept(*y)) return *s;
  throw NumericalFailure("flat_vector found no vector attaining its maximum at " + std::to_string(n) + " coordinates");
}

/// Eliminates the given coordinates (1-based) from the span by row reduction
/// with partial pivoting; returns len - |columns| vectors vanishing there.
inline std::vector<FiniteSequence> gaussian_reduce(const std::vector<FiniteSequence>& basis,
                                                   const std::vector<Index>& columns, double tol = 1e-12) {
  detail::require(basis.size() >= columns.size() + 1, "gaussian_reduce needs more vectors than eliminated coordinates");
  const auto D = detail::common_dimension(basis);
  std::vector<std::vector<double>> rows;
  for (const auto& b : basis) {
    std::vector<double> r(D, 0.0);
    std::copy(b.values().begin(), b.values().end(), r.begin());
    rows.push_back(std::move(r));
  }
  double scale = 0.0;
  for (const auto& r : rows)
    for (double v : r) scale = std::max(scale, std::abs(v));

  for (Index col : columns) {
    detail::require(col >= 1 && col <= D, "eliminated coordinate outside the basis support");
    const std::size_t c = col - 1;
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (std::abs(rows[i][c]) > std::abs(rows[pivot][c])) pivot = i;
    if (!(std::abs(rows[pivot][c]) > tol * scale))
      throw PreconditionError("degenerate basis: coordinate " + std::to_string(col) + " cannot be eliminated");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == pivot) continue;
      const double f = rows[i][c] / rows[pivot][c];
      for (std::size_t j = 0; j < D; ++j) rows[i][j] -= f * rows[pivot][j];
      rows[i][c] = 0.0;
    }
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pivot));
  }
  std::vector<FiniteSequence> out;
  for (auto& r : rows) out.emplace_back(std::move(r));
  return out;
}

/// Eliminates coordinates 1..k.
inline std::vector<FiniteSequence> gaussian_reduce(const std::vector<FiniteSequence>& basis, std::size_t k) {
  std::vector<Index> cols(k);
  std::iota(cols.begin(), cols.end(), Index{1});
  return gaussian_reduce(basis, cols);
}

struct DecayFit {
  double C = 1.0;
  double beta = 0.0;
};

/// Least squares for log b_n = log C - beta log n.
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& points) {
  detail::require(points.size() >= 3, "fit_decay needs at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [n, b] : points) {
    detail::require(n > 0.0 && b > 0.0, "fit_decay needs positive n and b_n");
    const double x = std::log(n), y = std::log(b);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double den = m * sxx - sx * sx;
  detail::require(den > 0.0, "fit_decay needs at least two distinct n");
  const double slope = (m * sxy - sx * sy) / den;
  return {std::exp((sy - slope * sx) / m), -slope};
}

enum class Strategy { coordinate, random, flat_blocks };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::coordinate: return "coordinate";
    case Strategy::random: return "random";
    case Strategy::flat_blocks: return "flat_blocks";
  }
  return "?";
}

struct BernsteinOptions {
  std::vector<Strategy> strategies{Strategy::coordinate, Strategy::random, Strategy::flat_blocks};
  int random_subspaces = 4;
  detail::SearchOptions search{32, 0.5, 0.5, 1e-9, 1500, -1};
  NormOptions norm{1e-10, 200};
  std::uint64_t seed = 0;
};

struct SubspaceEstimate {
  std::string descriptor;
  double value = 0.0;  // inf of ||a||_target / ||a||_source found on the subspace
  bool certified = false;
};

/// One row of a Bernstein report. `empirical_estimate` is the monotone
/// envelope of `raw_estimate` over the rows computed so far.
struct BernsteinReport {
  Index n = 0;
  Index shift = 0;  // coordinates eliminated before estimating
  std::optional<double> upper_bound_theorem;
  std::optional<double> upper_bound_proof;
  double raw_estimate = 0.0;
  double empirical_estimate = 0.0;
  std::string subspace_descriptor;
  bool certified = false;
  std::vector<SubspaceEstimate> candidates;
};

namespace detail {

inline std::string describe_coordinates(const std::vector<Index>& idx) {
  std::string s = "coordinates{";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + "}";
}

inline bool constant_on(const ExponentSequence& p, const std::vector<Index>& idx) {
  for (Index n : idx)
    if (!(p(n) == p(idx.front()))) return false;
  return true;
}

// inf over span(basis) of ||a||_target / ||a||_source by multistart pattern search.
inline double minimize_ratio(const std::vector<FiniteSequence>& basis, const ExponentSequence& source,
                             const ExponentSequence& target, const BernsteinOptions& opt, std::uint64_t seed) {
  const Eigen::MatrixXd B = as_columns(basis);
  const auto m = B.cols();
  std::vector<Index> support;
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    if (B.row(i).cwiseAbs().maxCoeff() > 0.0) support.push_back(static_cast<Index>(i) + 1);
  // With one exponent on the whole support the Luxemburg norm is the classical one.
  auto norm_on_span = [&](const ExponentSequence& e) -> std::function<double(const Eigen::VectorXd&)> {
    if (!constant_on(e, support)) {
      return [&e, &opt](const Eigen::VectorXd& x) { return luxemburg_norm(to_sequence(x), e, opt.norm); };
    }
    const Exponent fixed = e(support.front());
    if (fixed.is_infinite()) return [](const Eigen::VectorXd& x) { return x.cwiseAbs().maxCoeff(); };
    const double pe = fixed.value();
    return [pe](const Eigen::VectorXd& x) {
      const double s = x.cwiseAbs().maxCoeff();
      if (s == 0.0) return 0.0;
      double sum = 0.0;
      for (double v : x) sum += std::pow(std::abs(v) / s, pe);
      return s * std::pow(sum, 1.0 / pe);
    };
  };
  const auto source_norm = norm_on_span(source);
  const auto target_norm = norm_on_span(target);
  auto ratio = [&](const Point& beta) {
    const Eigen::VectorXd x = B * Eigen::Map<const Eigen::VectorXd>(beta.data(), m);
    const double s = source_norm(x);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return target_norm(x) / s;
  };
  if (m == 1) return ratio(Point{1.0});
  const auto best = multistart_minimize(
      ratio, [&](std::mt19937_64& rng) { return random_unit_point(rng, static_cast<std::size_t>(m)); },
      normalize_euclidean, opt.search, seed);
  return best.value;
}

inline std::vector<FiniteSequence> coordinate_basis(const std::vector<Index>& idx, std::size_t D) {
  std::vector<FiniteSequence> basis;
  for (Index n : idx) basis.push_back(FiniteSequence::unit(D, n));
  return basis;
}

// Best subspace of dimension `dim` inside the coordinates `allowed`
// (eliminated coordinates are removed from random bases by row reduction).
inline std::vector<SubspaceEstimate> subspace_candidates(const ExponentSequence& source, const ExponentSequence& target,
                                                         std::size_t dim, std::size_t D,
                                                         const std::vector<Index>& eliminated,
                                                         const BernsteinOptions& opt) {
  std::vector<Index> allowed;
  for (Index i = 1; i <= D; ++i)
    if (std::find(eliminated.begin(), eliminated.end(), i) == eliminated.end()) allowed.push_back(i);
  require(dim >= 1 && dim <= allowed.size(), "subspace dimension exceeds the available coordinates");

  std::vector<SubspaceEstimate> out;
  std::uint64_t task = 0;
  auto coordinate_estimate = [&](std::vector<Index> idx) {
    std::sort(idx.begin(), idx.end());
    const auto desc = describe_coordinates(idx);
    for (const auto& c : out)
      if (c.descriptor == desc) return;
    SubspaceEstimate e{desc, 0.0, false};
    if (constant_on(source, idx) && constant_on(target, idx)) {
      const double k = static_cast<double>(idx.size());
      e.value = std::pow(k, std::min(0.0, target(idx[0]).reciprocal() - source(idx[0]).reciprocal()));
      e.certified = true;
    } else {
      e.value = minimize_ratio(coordinate_basis(idx, D), source, target, opt, splitmix64(opt.seed + ++task));
    }
    out.push_back(std::move(e));
  };

  const bool whole = dim == allowed.size();
  for (auto s : opt.strategies) {
    if (whole && s != Strategy::coordinate) continue;
    switch (s) {
      case Strategy::coordinate: {
        coordinate_estimate({allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(dim)});
        coordinate_estimate({allowed.end() - static_cast<std::ptrdiff_t>(dim), allowed.end()});
        // Where the target exponent falls furthest below the source the ratio stays largest.
        auto by_gap = allowed;
        std::stable_sort(by_gap.begin(), by_gap.end(), [&](Index a, Index b) {
          return target(a).reciprocal() - source(a).reciprocal() > target(b).reciprocal() - source(b).reciprocal();
        });
        coordinate_estimate({by_gap.begin(), by_gap.begin() + static_cast<std::ptrdiff_t>(dim)});
        break;
      }
      case Strategy::random: {
        for (int j = 0; j < opt.random_subspaces; ++j) {
          auto rng = stream_rng(opt.seed, 1000 + static_cast<std::uint64_t>(j));
          std::vector<FiniteSequence> basis;
          for (std::size_t k = 0; k < dim + eliminated.size(); ++k) {
            std::vector<double> v(D);
            for (auto& x : v) x = gaussian(rng);
            basis.emplace_back(std::move(v));
          }
          if (!eliminated.empty()) basis = gaussian_reduce(basis, eliminated);
          out.push_back({"random#" + std::to_string(j), minimize_ratio(basis, source, target, opt,
                                                                        splitmix64(opt.seed + ++task)),
                         false});
        }
        break;
      }
      case Strategy::flat_blocks: {
        const std::size_t width = allowed.size() / dim;
        if (width < 2) break;
        std::vector<FiniteSequence> basis;
        for (std::size_t k = 0; k < dim; ++k) {
          std::vector<double> v(D, 0.0);
          for (std::size_t i = 0; i < width; ++i) v[allowed[k * width + i] - 1] = 1.0;
          basis.emplace_back(std::move(v));
        }
        out.push_back({"flat_blocks(width=" + std::to_string(width) + ")",
                       minimize_ratio(basis, source, target, opt, splitmix64(opt.seed + ++task)), false});
        break;
      }
    }
  }
  return out;
}

inline BernsteinReport best_of(Index n, Index shift, std::vector<SubspaceEstimate> candidates) {
  BernsteinReport r;
  r.n = n;
  r.shift = shift;
  const SubspaceEstimate* best = nullptr;
  for (const auto& c : candidates)
    if (!best || c.value > best->value || (c.value == best->value && c.descriptor < best->descriptor)) best = &c;
  r.raw_estimate = best->value;
  r.empirical_estimate = best->value;
  r.subspace_descriptor = best->descriptor;
  r.certified = best->certified;
  r.candidates = std::move(candidates);
  return r;
}

inline void attach_bounds(BernsteinReport& r, const ExponentSequence& p, const ExponentSequence& q) {
  try {
    const auto [theorem, proof] = upper_bound(p, q, r.n);
    r.upper_bound_theorem = theorem;
    r.upper_bound_proof = proof;
  } catch (const PreconditionError&) {
  }
}

}  // namespace detail

/// Estimate of b_n(id: l_p -> l_q) on the first D coordinates: the largest
/// inf ||a||_q / ||a||_p found over candidate n-dimensional subspaces. Only
/// constant-exponent coordinate subspaces carry a certified value.
inline BernsteinReport bernstein_estimate(const ExponentSequence& p, const ExponentSequence& q, Index n, Index D,
                                          const BernsteinOptions& opt = {}) {
  detail::require(n >= 1 && n <= D, "bernstein_estimate needs 1 <= n <= D");
  auto r = detail::best_of(n, 0, detail::subspace_candidates(p, q, n, D, {}, opt));
  detail::attach_bounds(r, p, q);
  return r;
}

/// Rows n = 1..n_max with the monotone envelope applied.
inline std::vector<BernsteinReport> bernstein_series(const ExponentSequence& p, const ExponentSequence& q, Index n_max,
                                                     Index D, const BernsteinOptions& opt = {}) {
  std::vector<BernsteinReport> rows;
  for (Index n = 1; n <= n_max; ++n) {
    rows.push_back(bernstein_estimate(p, q, n, D, opt));
    if (rows.size() > 1)
      rows.back().empirical_estimate = std::min(rows.back().raw_estimate, rows[rows.size() - 2].empirical_estimate);
  }
  return rows;
}

inline DecayFit fit_decay(const std::vector<BernsteinReport>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(static_cast<double>(r.n), r.empirical_estimate);
  return fit_decay(pts);
}

/// b_n of the reverse embedding l_q -> l_p when {p_n < q_n} is finite with k
/// members: those coordinates are eliminated and the estimate runs on an
/// (n - k)-dimensional subspace of the complement.
inline BernsteinReport reversed_bn_estimate(const ExponentSequence& p, const ExponentSequence& q, Index n, Index D,
                                            const BernsteinOptions& opt = {}) {
  const auto A = difference_set(p, q, Comparison::less);
  detail::require(A.is_finite(), "reversed estimate needs {p_n < q_n} finite");
  const auto back = decide_embedding(q, p);
  detail::require(back.status == DirectionVerdict::Status::holds, "reversed estimate needs l_q to embed into l_p");
  const auto killed = A.enumerate(std::max<Index>(A.horizon(), D));
  for (Index i : killed) detail::require(i <= D, "{p_n < q_n} reaches beyond the truncation D");
  const Index k = killed.size();
  detail::require(n > k && n <= D, "reversed estimate needs k < n <= D");
  return detail::best_of(n, k, detail::subspace_candidates(q, p, n - k, D, killed, opt));
}

struct SingularityVerdict {
  enum class Kind { not_strictly_singular, finitely_strictly_singular, undecided } kind = Kind::undecided;
  std::optional<IndexSet> subset;  // where sum c^{r_n} converges (not strictly singular)
  double c = 0.0;
  double M = 0.0;
  double beta_bound = 0.0;  // finitely strictly singular: b_n <= C n^{-beta_bound}
  std::string note;
};

inline const char* to_string(SingularityVerdict::Kind k) {
  switch (k) {
    case SingularityVerdict::Kind::not_strictly_singular: return "not_strictly_singular";
    case SingularityVerdict::Kind::finitely_strictly_singular: return "finitely_strictly_singular";
    case SingularityVerdict::Kind::undecided: return "undecided";
  }
  return "?";
}

/// Strict singularity of id: l_p -> l_q.
inline SingularityVerdict singularity_classify(const ExponentSequence& p, const ExponentSequence& q,
                                               Index cap = default_enumeration_cap) {
  using Kind = SingularityVerdict::Kind;
  SingularityVerdict v;
  const auto forward = decide_embedding(p, q, cap);
  if (forward.status != DirectionVerdict::Status::holds) {
    v.note = std::string("forward embedding ") + to_string(forward.status);
    return v;
  }
  if (difference_set(p, q, Comparison::unequal, cap).certainly_empty()) {
    v.note = "p = q: the embedding is the identity map";
    return v;
  }
  const auto pa = analyze_pair(p, q, cap);
  if (!pa.resolved) {
    v.note = "eventual order of p and q is not certified";
    return v;
  }
  const IndexSet beyond = IndexSet::all().minus(IndexSet::range(1, pa.horizon));

  if (pa.tail_sign <= 0) {
    // Eventually p_n >= q_n and the forward embedding holds, so both norms agree there.
    v.kind = Kind::not_strictly_singular;
    v.subset = beyond;
    v.c = pa.tail_sign == 0 ? 0.5 : forward.criterion.c;
    v.M = pa.tail_sign == 0 ? 0.0 : forward.criterion.M;
    v.note = pa.tail_sign == 0 ? "p = q on a cofinite set" : "l_q embeds back on the tail";
    return v;
  }

  const auto A = difference_set(p, q, Comparison::less, cap);
  const auto tail = detail::gap_tail(p, q);
  if (tail.kind != detail::GapTail::Kind::bounded) {
    const auto e = exists_c(p, q, A, cap);
    if (e.answer != ExistsC::Answer::yes) {
      v.note = "criterion sum on {p_n < q_n} not certified";
      return v;
    }
    v.kind = Kind::not_strictly_singular;
    v.subset = A;
    v.c = e.c;
    v.M = e.M;
    v.note = "gap reciprocal unbounded";
    return v;
  }

  // Bounded gap reciprocal: K_r = sup r_n over {p_n < q_n}.
  const Exponent p_plus = p.sup();
  if (p_plus.is_infinite() || !p.constant_tail() || !q.constant_tail()) {
    v.note = "p_+ is infinite; no decay exponent";
    return v;
  }
  const Index H = std::max<Index>({pa.horizon, p.prefix_length(), q.prefix_length()}) + 1;
  double Kr = 0.0;
  for (Index n = 1; n <= H; ++n)
    if (p(n) < q(n)) Kr = std::max(Kr, gap_reciprocal(p(n), q(n)).value());
  const double pm = p.inf().value();
  const double alpha = pm * pm / Kr;
  const double pp = p_plus.value();
  double beta = alpha / (pp * (pp + alpha));
  if (q.sup().is_finite()) {
    try {
      beta = std::max(beta, bernstein_bounds(p, q).proof_exponent);
    } catch (const PreconditionError&) {
    }
  }
  v.kind = Kind::finitely_strictly_singular;
  v.beta_bound = beta;
  v.note = "gap reciprocal bounded by " + std::to_string(Kr);
  return v;
}

}  // namespace vlseq
