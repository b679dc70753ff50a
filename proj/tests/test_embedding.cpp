#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "vlseq/detail/random.hpp"
#include "vlseq/embedding.hpp"

using namespace vlseq;

namespace {

const auto one = ExponentSequence::constant(1.0);
const auto two = ExponentSequence::constant(2.0);
const auto linf = ExponentSequence::constant(Exponent::infinity());

// p_n = n
const ExponentSequence identity_exponents({}, PowerTail{1.0, 1.0}, Exponent(1.0));

// p_n = 4 ln n + 4 against q = inf: r_n = p_n.
const ExponentSequence log_exponents({}, AffineLogTail{4.0, 4.0}, Exponent(4.0));

}  // namespace

TEST(CriterionSum, ConstantGap) {
  const auto A = difference_set(one, two, Comparison::less);
  const auto r = criterion_sum(one, two, 0.5, A, 20);
  EXPECT_DOUBLE_EQ(r.partial_sum, 5.0);
  EXPECT_EQ(r.tail_verdict, TailVerdict::divergent);
  EXPECT_FALSE(r.M);
}

TEST(CriterionSum, GeometricSeries) {
  const auto A = difference_set(identity_exponents, linf, Comparison::less);
  const auto r = criterion_sum(identity_exponents, linf, 0.5, A, 40);
  EXPECT_EQ(r.tail_verdict, TailVerdict::convergent);
  ASSERT_TRUE(r.M);
  // sum_{n >= 1} 2^{-n} = 1; the certified bound may only exceed it.
  EXPECT_NEAR(r.partial_sum, 1.0 - std::pow(2.0, -40), 1e-15);
  EXPECT_GE(*r.M, 1.0 - 1e-15);
  EXPECT_LE(*r.M, 1.0 + 1e-9);
}

TEST(CriterionSum, EmptySet) {
  const auto r = criterion_sum(one, two, 0.5, IndexSet::empty(), 10);
  EXPECT_EQ(r.partial_sum, 0.0);
  EXPECT_EQ(r.tail_verdict, TailVerdict::convergent);
  EXPECT_EQ(*r.M, 0.0);
}

TEST(CriterionSum, LogTailBoundDominatesLongSums) {
  // c = e^{-1/2}: terms c^{4 ln n + 4} = e^{-2} n^{-2}; compare M against a long explicit sum.
  const double c = std::exp(-0.5);
  const auto A = difference_set(log_exponents, linf, Comparison::less);
  const auto r = criterion_sum(log_exponents, linf, c, A, 1);
  ASSERT_TRUE(r.M);
  double explicit_sum = 0.0;
  for (int n = 1; n <= 2'000'000; ++n) explicit_sum += std::exp(-2.0) / (static_cast<double>(n) * n);
  EXPECT_GE(*r.M, explicit_sum);
  EXPECT_NEAR(*r.M, std::exp(-2.0) * M_PI * M_PI / 6.0, 0.1);
}

TEST(CriterionSum, MonotoneInC) {
  const auto A = difference_set(identity_exponents, linf, Comparison::less);
  double last = 0.0;
  for (double c = 0.05; c < 1.0; c += 0.05) {
    const double s = criterion_sum(identity_exponents, linf, c, A, 30).partial_sum;
    ASSERT_GE(s, last);
    last = s;
  }
}

TEST(ExistsC, Examples) {
  EXPECT_EQ(exists_c(one, two, difference_set(one, two, Comparison::less)).answer, ExistsC::Answer::no);

  const auto e = exists_c(one, two, IndexSet::range(1, 5));
  EXPECT_EQ(e.answer, ExistsC::Answer::yes);
  EXPECT_EQ(e.c, 0.5);
  EXPECT_DOUBLE_EQ(e.M, 5.0 * 0.25);

  const auto lg = ExponentSequence({}, AffineLogTail{4.0, 1.0}, Exponent(1.0));
  const auto l = exists_c(lg, linf, difference_set(lg, linf, Comparison::less));
  EXPECT_EQ(l.answer, ExistsC::Answer::yes);
  EXPECT_DOUBLE_EQ(l.c, std::exp(-0.5));
}

TEST(ExistsC, SlowLogNeedsSmallC) {
  // r_n = ln n / 2 + 1: sum c^{r_n} = c sum n^{ln(c)/2} converges only once ln c < -2.
  const auto lg = ExponentSequence({}, AffineLogTail{0.5, 1.0}, Exponent(1.0));
  const auto e = exists_c(lg, linf, difference_set(lg, linf, Comparison::less));
  ASSERT_EQ(e.answer, ExistsC::Answer::yes);
  EXPECT_LT(0.5 * std::log(e.c), -1.0);
}

TEST(Linfty, Examples) {
  const auto rel = linfty_relation(identity_exponents);
  EXPECT_EQ(rel.kind, LinftyRelation::Kind::coincides);
  EXPECT_EQ(rel.c, 0.5);
  EXPECT_NEAR(rel.M, 1.0, 1e-9);
  EXPECT_NEAR(rel.upper, 2.0, 2e-9);

  EXPECT_EQ(linfty_relation(two).kind, LinftyRelation::Kind::distinct);

  const auto all_inf = linfty_relation(linf);
  EXPECT_EQ(all_inf.kind, LinftyRelation::Kind::coincides);
  EXPECT_EQ(all_inf.upper, 1.0);
  EXPECT_EQ(all_inf.M, 0.0);
}

TEST(EmbeddingConstant, Regimes) {
  EXPECT_DOUBLE_EQ(embedding_constant(Regime::finite_q, 0.5, 1.0, Exponent(1.0)), 8.0);
  EXPECT_DOUBLE_EQ(embedding_constant(Regime::mixed_q, 0.5, 1.0, Exponent(1.0)), 20.0);
  EXPECT_DOUBLE_EQ(embedding_constant(Regime::general, 0.5, 1.0, Exponent(1.0)), 46.0);
  EXPECT_THROW(embedding_constant(Regime::general, 1.0, 1.0, Exponent(1.0)), PreconditionError);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_pair(one, two).classification, PairClass::strict_forward);
  EXPECT_EQ(classify_pair(two, one).classification, PairClass::strict_backward);

  const auto eq = classify_pair(two, two);
  EXPECT_EQ(eq.classification, PairClass::equivalent);
  EXPECT_EQ(eq.forward.constant_bound, 1.0);
  EXPECT_EQ(eq.backward.constant_bound, 1.0);

  EXPECT_EQ(classify_pair(log_exponents, linf).classification, PairClass::equivalent);
}

TEST(Classify, PrefixDisagreementIsHarmless) {
  // p > q only at n = 1; p < q on the whole tail.
  const ExponentSequence p({Exponent(2.0)}, ConstantTail{Exponent(1.0)}, Exponent(1.0));
  const ExponentSequence q({Exponent(1.0)}, ConstantTail{Exponent(2.0)}, Exponent(1.0));
  const auto v = classify_pair(p, q);
  // {q < p} = {1} is finite, so l_p -> l_q holds; {p < q} is cofinite with bounded gap.
  EXPECT_EQ(v.forward.status, DirectionVerdict::Status::holds);
  EXPECT_EQ(v.backward.status, DirectionVerdict::Status::fails);
  EXPECT_EQ(v.classification, PairClass::strict_forward);
}

TEST(Classify, SwapSymmetry) {
  const std::vector<ExponentSequence> pool = {
      one, two, linf, identity_exponents, log_exponents,
      ExponentSequence({Exponent(3.0)}, ConstantTail{Exponent(1.5)}, Exponent(1.5)),
      ExponentSequence({}, PowerTail{2.0, 0.5}, Exponent(2.0)),
      ExponentSequence({Exponent(0.5), Exponent::infinity()}, ConstantTail{Exponent(4.0)}, Exponent(0.5))};
  for (const auto& p : pool) {
    EXPECT_EQ(classify_pair(p, p).classification, PairClass::equivalent);
    for (const auto& q : pool) {
      const auto a = classify_pair(p, q), b = classify_pair(q, p);
      EXPECT_EQ(a.forward.status, b.backward.status);
      EXPECT_EQ(a.backward.status, b.forward.status);
    }
  }
}

TEST(Empirical, PointwiseOrderedHasConstantOne) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<Exponent> pe, qe;
    for (int i = 0; i < 12; ++i) {
      const double v = detail::uniform(rng, 0.4, 3.0);
      pe.emplace_back(v);
      qe.emplace_back(v + detail::uniform(rng, 0.0, 2.0));
    }
    const auto p = ExponentSequence::finite_prefix(pe), q = ExponentSequence::finite_prefix(qe);
    // ||a||_q <= ||a||_p when p <= q < inf pointwise. (An infinite q_n enters the
    // modular as |a_n| rather than |a_n|^{q_n}, so that case needs a larger constant.)
    const auto check = verify_embedding_empirically(q, p, 1.0, 200, 12, t);
    EXPECT_LE(check.max_ratio, 1.0 + 1e-9);
  }
}

TEST(Empirical, InfiniteTargetExponentsNeedLargerConstant) {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int t = 0; t < 40; ++t) {
    std::vector<Exponent> pe, qe;
    for (int i = 0; i < 10; ++i) {
      const double v = detail::uniform(rng, 0.4, 3.0);
      pe.emplace_back(v);
      qe.emplace_back(i % 3 == 0 ? Exponent::infinity() : Exponent(v + detail::uniform(rng, 0.0, 2.0)));
    }
    const auto p = ExponentSequence::finite_prefix(pe), q = ExponentSequence::finite_prefix(qe);
    const auto v = decide_embedding(p, q);
    ASSERT_EQ(v.status, DirectionVerdict::Status::holds);
    ASSERT_GT(v.constant_bound, 1.0);
    const auto check = verify_embedding_empirically(q, p, v.constant_bound, 300, 10, t);
    EXPECT_TRUE(check.within_bound) << check.max_ratio << " vs " << v.constant_bound;
    worst = std::max(worst, check.max_ratio);
  }
  // The constant 1 of the all-finite case is genuinely exceeded.
  EXPECT_GT(worst, 1.0);
  EXPECT_EQ(decide_embedding(one, two).constant_bound, 1.0);
}

TEST(Empirical, CertifiedConstantsHold) {
  const auto rel = linfty_relation(identity_exponents);
  const auto check = verify_embedding_empirically(identity_exponents, linf, rel.upper, 2000, 30, 5);
  EXPECT_TRUE(check.within_bound) << check.max_ratio;

  const auto v = decide_embedding(linf, identity_exponents);
  ASSERT_EQ(v.status, DirectionVerdict::Status::holds);
  const auto c2 = verify_embedding_empirically(identity_exponents, linf, v.constant_bound, 2000, 30, 6);
  EXPECT_TRUE(c2.within_bound);
  EXPECT_LE(verify_embedding_empirically(two, one, 1.0, 500, 20, 7).max_ratio, 1.0 + 1e-9);
  EXPECT_NEAR(verify_embedding_empirically(two, two, 1.0, 100, 20, 8).max_ratio, 1.0, 1e-12);
}
