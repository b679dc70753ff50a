#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "vlseq/detail/optimize.hpp"
#include "vlseq/detail/parallel.hpp"
#include "vlseq/detail/random.hpp"
#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/norms.hpp"
#include "vlseq/sequence.hpp"

namespace vlseq {

/// rho(x, y) = sum_{p_n < 1} |x_n - y_n|^{p_n} + ||(x - y) chi_{p_n >= 1}||_p.
inline double rho_metric(const FiniteSequence& x, const FiniteSequence& y, const ExponentSequence& p,
                         NormOptions opts = {}) {
  const FiniteSequence d = x - y;
  double low = 0.0;
  std::vector<double> high(d.dimension(), 0.0);
  for (std::size_t i = 0; i < d.dimension(); ++i) {
    const Exponent e = p(i + 1);
    if (e.value() < 1.0) low += abs_pow(d[i], e.value());
    else high[i] = d[i];
  }
  return low + luxemburg_norm(FiniteSequence(std::move(high)), p, opts);
}

namespace detail {

// The inclusion radii need every exponent at most 1; outside that regime there is no formula.
inline bool all_at_most_one(const ExponentSequence& p) { return p.sup().value() <= 1.0; }

inline void require_epsilon(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
}

}  // namespace detail

/// delta with U(y, delta) inside B(0, epsilon): delta = epsilon (1 - alpha),
/// alpha = sum |y_n / epsilon|^{p_n}. Empty when some p_n exceeds 1.
inline std::optional<double> inclusion_radius_U_in_B(const FiniteSequence& y, double epsilon,
                                                     const ExponentSequence& p) {
  detail::require_epsilon(epsilon);
  if (!detail::all_at_most_one(p)) return std::nullopt;
  const double alpha = modular(y / epsilon, p);
  detail::require(alpha < 1.0, "center lies outside the open ball B(0, epsilon)");
  return epsilon * (1.0 - alpha);
}

/// delta with B(y, delta) inside U(0, epsilon): delta = (epsilon - alpha)^{1/p_-},
/// alpha = sum |y_n|^{p_n}. Empty when some p_n exceeds 1.
inline std::optional<double> inclusion_radius_B_in_U(const FiniteSequence& y, double epsilon,
                                                     const ExponentSequence& p) {
  detail::require_epsilon(epsilon);
  if (!detail::all_at_most_one(p)) return std::nullopt;
  const double alpha = modular(y, p);
  detail::require(alpha < epsilon, "center lies outside the open metric ball U(0, epsilon)");
  return std::pow(epsilon - alpha, p.inf().reciprocal());
}

struct BallSpec {
  enum class Kind { quasi_norm_ball, metric_ball };
  FiniteSequence center;
  double radius;
  Kind kind;
};

inline double ball_distance(const BallSpec& ball, const FiniteSequence& z, const ExponentSequence& p) {
  if (ball.kind == BallSpec::Kind::metric_ball) return rho_metric(ball.center, z, p);
  return luxemburg_norm(z - ball.center, p);
}

struct InclusionCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max distance to the outer center over the outer radius
};

namespace detail {

// Random direction: one coordinate, a few coordinates, or all of them.
inline FiniteSequence random_direction(std::mt19937_64& rng, std::size_t D) {
  std::vector<double> v(D, 0.0);
  const int shape = static_cast<int>(rng() % 3);
  if (shape == 0) {
    v[rng() % D] = (rng() & 1U) ? 1.0 : -1.0;
  } else {
    const std::size_t k = shape == 1 ? 1 + rng() % std::min<std::size_t>(D, 3) : D;
    for (std::size_t j = 0; j < k; ++j) v[shape == 1 ? rng() % D : j] = gaussian(rng);
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return FiniteSequence(std::move(v));
}

// Largest t with distance(center, center + t d) < radius, by bisection.
inline double boundary_step(const BallSpec& ball, const FiniteSequence& d, const ExponentSequence& p) {
  auto dist = [&](double t) { return ball_distance(ball, ball.center + t * d, p); };
  if (ball.kind == BallSpec::Kind::quasi_norm_ball) {
    double t = ball.radius / luxemburg_norm(d, p);
    for (int it = 0; it < 64 && dist(t) >= ball.radius; ++it) t *= 1.0 - 1e-14;
    return t;
  }
  double lo = 0.0, hi = ball.radius;
  while (dist(hi) < ball.radius) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dist(mid) < ball.radius ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Draws points of the inner ball along random rays from its center (half of
/// them pressed against the boundary) and counts those outside the outer ball.
inline InclusionCheck check_inclusion(const BallSpec& inner, const BallSpec& outer, const ExponentSequence& p,
                                      std::size_t samples, std::uint64_t seed, double tol = 1e-12) {
  detail::require(samples >= 1, "check_inclusion needs at least one sample");
  detail::require(outer.radius > 0.0, "outer radius must be positive");
  InclusionCheck out;
  if (inner.radius <= 0.0) return out;
  const std::size_t D = std::max(inner.center.dimension(), outer.center.dimension());

  struct Draw {
    bool inside = false;
    double ratio = 0.0;
  };
  const auto draws = detail::parallel_map(samples, [&](std::size_t i) {
    auto rng = detail::stream_rng(seed, i);
    const auto d = detail::random_direction(rng, D);
    const double t_max = detail::boundary_step(inner, d, p);
    const double u = (i % 2 == 0) ? 1.0 - std::pow(10.0, detail::uniform(rng, -12.0, 0.0)) : detail::uniform(rng);
    const FiniteSequence z = inner.center + (u * t_max) * d;
    Draw r;
    r.inside = ball_distance(inner, z, p) < inner.radius;
    if (r.inside) r.ratio = ball_distance(outer, z, p) / outer.radius;
    return r;
  });
  for (const auto& r : draws) {
    if (!r.inside) continue;
    ++out.samples;
    out.worst_ratio = std::max(out.worst_ratio, r.ratio);
    if (r.ratio >= 1.0 + tol) ++out.violations;
  }
  return out;
}

struct RieszWitness {
  FiniteSequence z;
  double distance = 0.0;  // d = inf_{y in L} ||u - y||
  double eta = 0.0;
  double achieved = 0.0;  // ||u - v|| for the chosen v in L
  bool certified = false;  // convex distance problem (p_- >= 1)
};

namespace detail {

inline Eigen::MatrixXd span_matrix(const std::vector<FiniteSequence>& basis, std::size_t D) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    require(basis[j].dimension() <= D, "basis vector longer than the truncation D");
    for (std::size_t i = 0; i < basis[j].dimension(); ++i)
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = basis[j][i];
  }
  return B;
}

inline FiniteSequence from_eigen(const Eigen::VectorXd& v) {
  return FiniteSequence(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace detail

/// z with ||z|| = 1 and ||z - y|| > 1 - epsilon for every y in L = span(basis):
/// u outside L, v in L nearly nearest to u, z = (u - v) / ||u - v||.
inline RieszWitness riesz_witness(const std::vector<FiniteSequence>& basis, double epsilon, const ExponentSequence& p,
                                  std::size_t D, std::uint64_t seed = 0) {
  detail::require_epsilon(epsilon);
  detail::require(!basis.empty(), "riesz_witness needs a nonempty basis");
  const Eigen::MatrixXd B = detail::span_matrix(basis, D);
  const auto m = B.cols();
  const auto rank = Eigen::FullPivLU<Eigen::MatrixXd>(B).rank();
  detail::require(rank == m, "basis of L is linearly dependent");
  detail::require(static_cast<std::size_t>(m) < D, "L must be a proper subspace of the truncated space");

  Eigen::VectorXd u;
  for (std::size_t i = 0; i < D; ++i) {
    Eigen::MatrixXd ext(B.rows(), m + 1);
    ext << B, Eigen::VectorXd::Unit(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(i));
    if (Eigen::FullPivLU<Eigen::MatrixXd>(ext).rank() == m + 1) {
      u = ext.col(m);
      break;
    }
  }

  auto residual = [&](const detail::Point& beta) {
    const Eigen::VectorXd r = u - B * Eigen::Map<const Eigen::VectorXd>(beta.data(), m);
    return luxemburg_norm(detail::from_eigen(r), p);
  };
  const bool convex = p.inf().value() >= 1.0;
  detail::SearchOptions opt;
  opt.starts = convex ? 8 : 64;
  opt.min_step = 1e-12;
  opt.max_evaluations = 20000;
  const auto best = detail::multistart_minimize(
      residual,
      [&](std::mt19937_64& rng) {
        detail::Point x(static_cast<std::size_t>(m));
        for (auto& v : x) v = detail::gaussian(rng);
        return x;
      },
      [](detail::Point&) {}, opt, seed);
  if (!(best.value > 1e-12))
    throw NumericalFailure("distance from u to L could not be certified positive");

  RieszWitness w{detail::from_eigen(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D))), best.value, 0.0, 0.0, convex};
  w.eta = epsilon * w.distance / (2.0 * (1.0 - epsilon));
  const Eigen::VectorXd diff = u - B * Eigen::Map<const Eigen::VectorXd>(best.x.data(), m);
  w.achieved = luxemburg_norm(detail::from_eigen(diff), p);
  detail::require(w.achieved < w.distance + w.eta, "no element of L within d + eta of u");
  w.z = detail::from_eigen(diff / w.achieved);
  return w;
}

/// min ||z - y|| over sampled y in span(basis), with coefficient scales spread
/// over several orders of magnitude.
inline double sampled_distance_to_span(const FiniteSequence& z, const std::vector<FiniteSequence>& basis,
                                       const ExponentSequence& p, std::size_t samples, std::uint64_t seed) {
  const Eigen::MatrixXd B = detail::span_matrix(basis, z.dimension());
  const auto dists = detail::parallel_map(samples, [&](std::size_t i) {
    auto rng = detail::stream_rng(seed, i);
    Eigen::VectorXd beta(B.cols());
    for (auto& b : beta) b = detail::gaussian(rng);
    beta *= std::pow(10.0, detail::uniform(rng, -3.0, 1.0));
    return luxemburg_norm(z - detail::from_eigen(B * beta), p);
  });
  return *std::min_element(dists.begin(), dists.end());
}

}  // namespace vlseq
