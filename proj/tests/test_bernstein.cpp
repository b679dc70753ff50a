#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "vlseq/bernstein.hpp"
#include "vlseq/detail/random.hpp"

using namespace vlseq;

namespace {

const auto one = ExponentSequence::constant(1.0);
const auto two = ExponentSequence::constant(2.0);
const auto three = ExponentSequence::constant(3.0);

double span_residual(const FiniteSequence& x, const std::vector<FiniteSequence>& basis) {
  Eigen::MatrixXd B(x.dimension(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < x.dimension(); ++i) B(i, j) = basis[j][i];
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.values().data(), x.dimension());
  const Eigen::VectorXd coef = B.colPivHouseholderQr().solve(v);
  return (B * coef - v).norm();
}

std::vector<FiniteSequence> random_basis(std::mt19937_64& rng, std::size_t n, std::size_t D) {
  std::vector<FiniteSequence> b;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(D);
    for (auto& x : v) x = detail::gaussian(rng);
    b.emplace_back(std::move(v));
  }
  return b;
}

}  // namespace

TEST(Classical, Examples) {
  EXPECT_DOUBLE_EQ(classical_bernstein(Exponent(1), Exponent(2), 4), 0.5);
  EXPECT_DOUBLE_EQ(classical_bernstein(Exponent(1), Exponent(2), 9), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(classical_bernstein(Exponent(2), Exponent::infinity(), 16), 0.25);
  EXPECT_THROW(classical_bernstein(Exponent(2), Exponent(1), 4), PreconditionError);
}

TEST(UpperBound, ConstantExponents) {
  for (Index n : {1, 2, 5, 17}) {
    const auto [theorem, proof] = upper_bound(one, three, n);
    EXPECT_NEAR(theorem, std::pow(n, -2.0 / 3.0), 1e-15);
    EXPECT_NEAR(proof, std::pow(n, -2.0 / 3.0), 1e-15);
  }
  const auto b = bernstein_bounds(one, two);
  EXPECT_EQ(b.alpha, 1.0);
  EXPECT_DOUBLE_EQ(b.theorem_exponent, 0.5);
  EXPECT_DOUBLE_EQ(b.proof_exponent, 0.5);
  EXPECT_THROW(upper_bound(one, ExponentSequence::constant(Exponent::infinity()), 2), PreconditionError);
  EXPECT_THROW(upper_bound(two, two, 2), PreconditionError);
}

// q_+ - alpha >= p_+, so the proof exponent is at least the stated one.
TEST(UpperBound, ProofBoundBelowTheoremBound) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    std::vector<Exponent> pe, qe;
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t i = 0; i < len; ++i) {
      const double v = detail::uniform(rng, 0.3, 4.0);
      pe.emplace_back(v);
      qe.emplace_back(v + detail::uniform(rng, 0.05, 3.0));
    }
    const double tail = detail::uniform(rng, 0.3, 4.0);
    const ExponentSequence p(pe, ConstantTail{Exponent(tail)}, Exponent(0.3));
    const ExponentSequence q(qe, ConstantTail{Exponent(tail + 0.5)}, Exponent(0.35));
    for (Index n : {1, 3, 10, 100}) {
      const auto [theorem, proof] = upper_bound(p, q, n);
      ASSERT_LE(proof, theorem);
    }
  }
}

TEST(FlatVector, Examples) {
  const auto x = flat_vector({FiniteSequence{1, 0, 0}, FiniteSequence{0, 1, 2}});
  EXPECT_EQ(flat_count(x), 2u);
  EXPECT_NEAR(std::abs(x[0]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(x[2]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(x[1]), 0.5, 1e-12);

  const auto e = flat_vector({FiniteSequence{0, 3, 0}});
  EXPECT_EQ(flat_count(e), 1u);
  EXPECT_THROW(flat_vector({FiniteSequence{1, 1}, FiniteSequence{2, 2}}), PreconditionError);
  EXPECT_EQ(flat_count(FiniteSequence{1, -1, 0.5}), 2u);
}

TEST(FlatVector, RandomBases) {
  std::mt19937_64 rng(22);
  for (std::size_t n : {2, 3, 4, 5}) {
    for (int t = 0; t < 10; ++t) {
      const auto basis = random_basis(rng, n, 9);
      const auto x = flat_vector(basis);
      ASSERT_GE(flat_count(x), n);
      ASSERT_LT(span_residual(x, basis), 1e-9);
    }
  }
}

TEST(GaussianReduce, Example) {
  const auto r = gaussian_reduce({FiniteSequence{1, 1, 0}, FiniteSequence{1, 0, 1}}, 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0][0], 0.0);
  EXPECT_NEAR(std::abs(r[0][1]), 1.0, 1e-15);
  EXPECT_NEAR(r[0][1] + r[0][2], 0.0, 1e-15);
  EXPECT_THROW(gaussian_reduce({FiniteSequence{0, 1, 0}, FiniteSequence{0, 0, 1}}, 1), PreconditionError);
}

TEST(GaussianReduce, RandomBasesVanishAndStayInSpan) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 4, k = 1 + rng() % (n - 1);
    const auto basis = random_basis(rng, n, 10);
    const auto r = gaussian_reduce(basis, k);
    ASSERT_EQ(r.size(), n - k);
    for (const auto& v : r) {
      for (std::size_t i = 0; i < k; ++i) ASSERT_EQ(v[i], 0.0);
      ASSERT_LT(span_residual(v, basis), 1e-9 * (1 + std::sqrt(v.values().size())));
    }
  }
}

TEST(FitDecay, ExactAndFlat) {
  std::vector<std::pair<double, double>> pts;
  for (int n = 1; n <= 6; ++n) pts.emplace_back(n, 3.0 * std::pow(n, -0.5));
  const auto f = fit_decay(pts);
  EXPECT_NEAR(f.beta, 0.5, 1e-12);
  EXPECT_NEAR(f.C, 3.0, 1e-12);
  using Points = std::vector<std::pair<double, double>>;
  EXPECT_NEAR(fit_decay(Points{{1, 2}, {2, 2}, {3, 2}}).beta, 0.0, 1e-15);
  EXPECT_THROW(fit_decay(Points{{1, 2}, {2, 2}}), PreconditionError);
}

TEST(Estimate, ConstantExponentsMatchClassical) {
  const auto rows = bernstein_series(one, two, 5, 12);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.certified);
    EXPECT_NEAR(r.empirical_estimate, std::pow(r.n, -0.5), 1e-9) << r.n;
    ASSERT_TRUE(r.upper_bound_theorem);
    EXPECT_LE(r.empirical_estimate, *r.upper_bound_theorem * 1.05);
  }
  EXPECT_NEAR(fit_decay(rows).beta, 0.5, 1e-6);
}

TEST(Estimate, EnvelopeIsMonotone) {
  const ExponentSequence p({Exponent(1.0), Exponent(1.5), Exponent(0.8)}, ConstantTail{Exponent(1.2)}, Exponent(0.8));
  const ExponentSequence q({Exponent(2.5), Exponent(2.0), Exponent(1.4)}, ConstantTail{Exponent(3.0)}, Exponent(1.4));
  BernsteinOptions opt;
  opt.random_subspaces = 2;
  const auto rows = bernstein_series(p, q, 4, 8, opt);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_LE(rows[i].empirical_estimate, rows[i].raw_estimate);
    if (i > 0) {
      EXPECT_LE(rows[i].empirical_estimate, rows[i - 1].empirical_estimate);
    }
    EXPECT_GT(rows[i].empirical_estimate, 0.0);
    EXPECT_LE(rows[i].empirical_estimate, 1.0 + 1e-9);
  }
  EXPECT_THROW(bernstein_estimate(p, q, 9, 8), PreconditionError);
}

TEST(Reversed, NoEliminationMatchesForward) {
  const auto rev = reversed_bn_estimate(two, one, 3, 10);
  const auto fwd = bernstein_estimate(one, two, 3, 10);
  EXPECT_EQ(rev.shift, 0u);
  EXPECT_EQ(rev.raw_estimate, fwd.raw_estimate);
  EXPECT_EQ(rev.subspace_descriptor, fwd.subspace_descriptor);
}

TEST(Reversed, EliminatesFiniteDifferenceSet) {
  const ExponentSequence p({Exponent(1.0), Exponent(1.0)}, ConstantTail{Exponent(2.0)}, Exponent(1.0));
  const auto r = reversed_bn_estimate(p, two, 3, 10);
  EXPECT_EQ(r.shift, 2u);
  EXPECT_NEAR(r.raw_estimate, 1.0, 1e-9);
  EXPECT_THROW(reversed_bn_estimate(p, two, 2, 10), PreconditionError);
  EXPECT_THROW(reversed_bn_estimate(one, two, 3, 10), PreconditionError);
}

TEST(Singularity, Verdicts) {
  const auto fss = singularity_classify(one, two);
  EXPECT_EQ(fss.kind, SingularityVerdict::Kind::finitely_strictly_singular);
  EXPECT_DOUBLE_EQ(fss.beta_bound, 0.5);

  const ExponentSequence grow({}, PowerTail{1.0, 1.0}, Exponent(1.0));
  const auto nss = singularity_classify(grow, ExponentSequence::constant(Exponent::infinity()));
  EXPECT_EQ(nss.kind, SingularityVerdict::Kind::not_strictly_singular);
  EXPECT_EQ(nss.c, 0.5);
  ASSERT_TRUE(nss.subset);

  EXPECT_EQ(singularity_classify(two, one).kind, SingularityVerdict::Kind::undecided);
  EXPECT_EQ(singularity_classify(two, two).kind, SingularityVerdict::Kind::undecided);

  // p < q only on a finite prefix: the tail is an isomorphic copy.
  const ExponentSequence p({Exponent(1.0)}, ConstantTail{Exponent(2.0)}, Exponent(1.0));
  EXPECT_EQ(singularity_classify(p, two).kind, SingularityVerdict::Kind::not_strictly_singular);
}
