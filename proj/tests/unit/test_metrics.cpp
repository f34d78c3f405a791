#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "adrnet/core/error.hpp"
#include "adrnet/metrics/metrics.hpp"
#include "oracles.hpp"

using namespace adrnet;
using namespace adrnet::metrics;

namespace {

using V = std::vector<double>;

}  // namespace

TEST(Auc, Examples) {
  EXPECT_EQ(auc(V{0.9, 0.1}, V{1, 0}), 1.0);
  EXPECT_EQ(auc(V{0.4, 0.4, 0.4}, V{1, 0, 1}), 0.5);
  EXPECT_EQ(auc(V{0.8, 0.3, 0.5, 0.1}, V{1, 1, 0, 0}), 0.75);
}

TEST(Auc, UndefinedAndMismatched) {
  EXPECT_THROW(auc(V{0.1, 0.2}, V{1, 1}), MetricUndefinedError);
  EXPECT_THROW(auc(V{0.1, 0.2}, V{0, 0}), MetricUndefinedError);
  EXPECT_THROW(auc(V{0.1}, V{1, 0}), DimensionError);
}

TEST(Auc, MatchesPairwiseOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = oracle::random_instance(rng, 2 + rng.below(199), trial % 2 == 0);
    ASSERT_NEAR(auc(inst.scores, inst.labels), oracle::pairwise_auc(inst.scores, inst.labels), 1e-12);
  }
}

TEST(Auc, InvariantUnderIncreasingTransform) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 50, true);
    V t(inst.scores.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::exp(3.0 * inst.scores[i]) - 7.0;
    EXPECT_EQ(auc(t, inst.labels), auc(inst.scores, inst.labels));
    EXPECT_EQ(aupr(t, inst.labels), aupr(inst.scores, inst.labels));
  }
}

TEST(Auc, NegatedScoresComplementWithoutTies) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 80, false);
    V neg(inst.scores.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -inst.scores[i];
    EXPECT_NEAR(auc(inst.scores, inst.labels) + auc(neg, inst.labels), 1.0, 1e-12);
  }
}

TEST(Aupr, Examples) {
  EXPECT_EQ(aupr(V{0.3, 0.1, 0.7}, V{1, 1, 1}), 1.0);
  EXPECT_EQ(aupr(V{0.9, 0.5, 0.2}, V{1, 0, 0}), 1.0);
  EXPECT_NEAR(aupr(V{0.9, 0.8, 0.7}, V{1, 0, 1}), 0.5 + 0.5 * (2.0 / 3.0), 1e-15);
  EXPECT_THROW(aupr(V{0.9, 0.8}, V{0, 0}), MetricUndefinedError);
}

TEST(Aupr, TiesBrokenByIndex) {
  // Equal scores: the earlier index is ranked first.
  EXPECT_EQ(aupr(V{0.5, 0.5}, V{1, 0}), 1.0);
  EXPECT_EQ(aupr(V{0.5, 0.5}, V{0, 1}), 0.5);
}

TEST(Aupr, MatchesPairwiseOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = oracle::random_instance(rng, 2 + rng.below(199), trial % 2 == 0);
    ASSERT_NEAR(aupr(inst.scores, inst.labels), oracle::pairwise_aupr(inst.scores, inst.labels), 1e-12);
  }
}

TEST(TTest, ZeroMeanDifference) {
  const auto r = paired_t_test(V{1, 0}, V{0, 1});
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
  const auto same = paired_t_test(V{0.3, 0.5, 0.9}, V{0.3, 0.5, 0.9});
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p, 1.0);
}

TEST(TTest, DegenerateVariance) {
  EXPECT_THROW(paired_t_test(V{2, 3, 4}, V{1, 2, 3}), DegenerateVarianceError);
  EXPECT_THROW(paired_t_test(V{1}, V{0}), Error);
  EXPECT_THROW(paired_t_test(V{1, 2}, V{0}), DimensionError);
}

TEST(TTest, OneToFiveAgainstBoost) {
  const auto r = paired_t_test(V{1, 2, 3, 4, 5}, V{0, 0, 0, 0, 0});
  EXPECT_NEAR(r.t, 3.0 / (std::sqrt(2.5) / std::sqrt(5.0)), 1e-12);
  EXPECT_NEAR(r.t, 4.2426, 1e-4);
  EXPECT_EQ(r.df, 4.0);
  const boost::math::students_t dist(4.0);
  const double ref = 2.0 * boost::math::cdf(boost::math::complement(dist, r.t));
  EXPECT_NEAR(r.p, ref, 1e-12);
  EXPECT_NEAR(r.p, 0.0132, 1e-4);
}

TEST(TTest, AntisymmetricAndMatchesBoost) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(15);
    V a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const auto ab = paired_t_test(a, b), ba = paired_t_test(b, a);
    EXPECT_EQ(ab.t, -ba.t);
    EXPECT_EQ(ab.p, ba.p);
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double ref = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(ab.t)));
    EXPECT_NEAR(ab.p, ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(IncompleteBeta, MatchesBoost) {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = rng.uniform(0.2, 30.0), b = rng.uniform(0.2, 30.0), x = rng.uniform();
    EXPECT_NEAR(regularized_incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12);
  }
  EXPECT_EQ(regularized_incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(2, 3, 1.0), 1.0);
}

TEST(Summary, MeanAndSampleSd) {
  EXPECT_DOUBLE_EQ(mean(V{1, 2, 3, 4, 5}), 3.0);
  EXPECT_DOUBLE_EQ(sample_sd(V{1, 2, 3, 4, 5}), std::sqrt(2.5));
}
