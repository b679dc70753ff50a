#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vlseq/detail/random.hpp"
#include "vlseq/topology.hpp"

using namespace vlseq;

namespace {

const auto half = ExponentSequence::constant(0.5);
const auto one = ExponentSequence::constant(1.0);
const auto two = ExponentSequence::constant(2.0);

ExponentSequence random_exponents(std::mt19937_64& rng, std::size_t D) {
  std::vector<Exponent> e;
  for (std::size_t i = 0; i < D; ++i) e.emplace_back(detail::uniform(rng, 0.3, 3.0));
  e[0] = Exponent(0.3);
  return ExponentSequence::finite_prefix(std::move(e));
}

}  // namespace

TEST(Rho, Examples) {
  EXPECT_DOUBLE_EQ(rho_metric(FiniteSequence{1, 0}, FiniteSequence{0, 0}, half), 1.0);
  EXPECT_NEAR(rho_metric(FiniteSequence{3, 0}, FiniteSequence{0, 4}, two), 5.0, 1e-11);
  const ExponentSequence mixed({Exponent(0.5), Exponent(2.0)}, ConstantTail{Exponent(2.0)}, Exponent(0.5));
  EXPECT_NEAR(rho_metric(FiniteSequence{1, 3}, FiniteSequence{0, 0}, mixed), 4.0, 1e-11);
}

TEST(Rho, MetricAxiomsOnSamples) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const std::size_t D = 1 + rng() % 12;
    const auto p = random_exponents(rng, D);
    const auto x = detail::random_sequence(rng, D), y = detail::random_sequence(rng, D),
               z = detail::random_sequence(rng, D);
    const double xy = rho_metric(x, y, p), yx = rho_metric(y, x, p);
    ASSERT_EQ(xy, yx);
    ASSERT_EQ(rho_metric(x, x, p), 0.0);
    ASSERT_LE(rho_metric(x, z, p), xy + rho_metric(y, z, p) + 1e-12);
  }
}

TEST(Radii, Examples) {
  EXPECT_DOUBLE_EQ(*inclusion_radius_U_in_B(FiniteSequence{0.0}, 0.3, half), 0.3);
  EXPECT_DOUBLE_EQ(*inclusion_radius_U_in_B(FiniteSequence{0.125}, 0.5, half), 0.25);
  EXPECT_THROW(inclusion_radius_U_in_B(FiniteSequence{0.5}, 0.5, half), PreconditionError);

  EXPECT_DOUBLE_EQ(*inclusion_radius_B_in_U(FiniteSequence{0.0}, 0.25, half), 0.0625);
  EXPECT_DOUBLE_EQ(*inclusion_radius_B_in_U(FiniteSequence{0.0}, 0.25, one), 0.25);
  // alpha = eps - 1e-9 with y = alpha^2.
  const double eps = 0.25, alpha = eps - 1e-9;
  EXPECT_NEAR(*inclusion_radius_B_in_U(FiniteSequence{alpha * alpha}, eps, half), 1e-18, 1e-24);
  EXPECT_THROW(inclusion_radius_B_in_U(FiniteSequence{1.0}, 0.25, half), PreconditionError);

  EXPECT_THROW(inclusion_radius_B_in_U(FiniteSequence{0.0}, 1.0, half), PreconditionError);
  EXPECT_FALSE(inclusion_radius_U_in_B(FiniteSequence{0.0}, 0.5, two));
  EXPECT_FALSE(inclusion_radius_B_in_U(FiniteSequence{0.0}, 0.5, two));
}

TEST(Inclusion, PaperRadiiHold) {
  const ExponentSequence p({Exponent(0.5), Exponent(0.9), Exponent(0.7), Exponent(1.0)}, ConstantTail{Exponent(0.6)},
                           Exponent(0.5));
  const double eps = 0.4;
  const FiniteSequence y{0.01, -0.02, 0.0, 0.03, 0.005, 0.0};
  const double d1 = *inclusion_radius_U_in_B(y, eps, p);
  const FiniteSequence zero = FiniteSequence::zeros(6);
  const BallSpec U{y, d1, BallSpec::Kind::metric_ball}, B{zero, eps, BallSpec::Kind::quasi_norm_ball};
  EXPECT_EQ(check_inclusion(U, B, p, 2000, 1).violations, 0u);

  const double d2 = *inclusion_radius_B_in_U(y, eps, p);
  const BallSpec Bi{y, d2, BallSpec::Kind::quasi_norm_ball}, Uo{zero, eps, BallSpec::Kind::metric_ball};
  EXPECT_EQ(check_inclusion(Bi, Uo, p, 2000, 2).violations, 0u);

  const BallSpec inflated{y, 10 * d2, BallSpec::Kind::quasi_norm_ball};
  EXPECT_GT(check_inclusion(inflated, Uo, p, 2000, 3).violations, 0u);
}

TEST(Inclusion, ZeroInnerRadiusIsVacuous) {
  const BallSpec inner{FiniteSequence{0, 0}, 0.0, BallSpec::Kind::metric_ball};
  const BallSpec outer{FiniteSequence{5, 5}, 0.1, BallSpec::Kind::metric_ball};
  const auto c = check_inclusion(inner, outer, half, 100, 0);
  EXPECT_EQ(c.violations, 0u);
  EXPECT_EQ(c.samples, 0u);
}

TEST(Riesz, OrthogonalCase) {
  const auto w = riesz_witness({FiniteSequence{1, 0}}, 0.1, two, 2);
  EXPECT_NEAR(w.z[0], 0.0, 1e-6);
  EXPECT_NEAR(std::abs(w.z[1]), 1.0, 1e-12);
  EXPECT_NEAR(w.distance, 1.0, 1e-9);
  EXPECT_TRUE(w.certified);
  EXPECT_GE(sampled_distance_to_span(w.z, {FiniteSequence{1, 0}}, two, 2000, 1), 1.0 - 1e-9);
}

TEST(Riesz, DiagonalLineInL1) {
  const std::vector<FiniteSequence> L{FiniteSequence{1, 1}};
  const auto w = riesz_witness(L, 0.5, one, 2);
  EXPECT_NEAR(luxemburg_norm(w.z, one), 1.0, 1e-8);
  // Exact distance from z to the line: min over t of |z1 - t| + |z2 - t| by a fine scan.
  double best = 1e300;
  for (int i = -40000; i <= 40000; ++i) {
    const double t = i * 1e-4;
    best = std::min(best, std::abs(w.z[0] - t) + std::abs(w.z[1] - t));
  }
  EXPECT_GT(best, 0.5);
}

TEST(Riesz, RandomSubspaces) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 5; ++t) {
    std::vector<FiniteSequence> L;
    for (int j = 0; j < 2; ++j) L.push_back(detail::random_sequence(rng, 6));
    const double eps = 0.2;
    const auto w = riesz_witness(L, eps, ExponentSequence::constant(1.5), 6, t);
    EXPECT_NEAR(luxemburg_norm(w.z, ExponentSequence::constant(1.5)), 1.0, 1e-8);
    EXPECT_GT(sampled_distance_to_span(w.z, L, ExponentSequence::constant(1.5), 1000, t), 1.0 - eps);
  }
}

TEST(Riesz, Preconditions) {
  EXPECT_THROW(riesz_witness({FiniteSequence{1, 0}}, 1.0, two, 2), PreconditionError);
  EXPECT_THROW(riesz_witness({FiniteSequence{1, 0}, FiniteSequence{0, 1}}, 0.1, two, 2), PreconditionError);
  EXPECT_THROW(riesz_witness({FiniteSequence{1, 1, 0}, FiniteSequence{2, 2, 0}}, 0.1, two, 3), PreconditionError);
}
