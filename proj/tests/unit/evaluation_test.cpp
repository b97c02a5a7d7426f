#include <gtest/gtest.h>

#include <cmath>

#include "xplain/core/error.hpp"
#include "xplain/evaluation/agreement.hpp"

#include "support/fixtures.hpp"

namespace xplain {
namespace {

Attribution attribution(std::vector<std::string> units, std::vector<double> scores,
                        UnitKind kind = UnitKind::token, std::string target = "late") {
  Attribution a;
  a.method = Method::lime;
  a.target_class = std::move(target);
  a.unit_kind = kind;
  a.units = std::move(units);
  a.scores = std::move(scores);
  return a;
}

TEST(Spearman, SelfReversalAndSwap) {
  EXPECT_EQ(spearman({1, 2, 3, 4}, {1, 2, 3, 4}), 1.0);
  EXPECT_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {1, 2, 4, 3}), 0.8, 1e-12);
}

TEST(Spearman, TiesUseAverageRanks) {
  // Ranks of a: [1.5, 1.5, 3]; b: [1, 2, 3]. Pearson of ranks = sqrt(3)/2.
  EXPECT_NEAR(spearman({5, 5, 9}, {1, 2, 3}), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(Spearman, RejectsDegenerateInputs) {
  EXPECT_THROW(spearman({1}, {2}), Error);
  EXPECT_THROW(spearman({1, 1, 1}, {1, 2, 3}), Error);
  EXPECT_THROW(spearman({1, 2}, {1, 2, 3}), Error);
}

TEST(Align, IntersectsInFirstOrder) {
  const auto aligned = align_units(attribution({"x@0", "y@1"}, {1, 2}), attribution({"y@1", "z@2"}, {3, 4}));
  EXPECT_EQ(aligned.units, std::vector<std::string>{"y@1"});
  EXPECT_EQ(aligned.a, std::vector<double>{2});
  EXPECT_EQ(aligned.b, std::vector<double>{3});
  EXPECT_EQ(aligned.excluded, 2u);
}

TEST(Align, RejectsDisjointAndMismatchedAttributions) {
  try {
    align_units(attribution({"a@0"}, {1}), attribution({"b@0"}, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no common units"), std::string::npos);
  }
  EXPECT_THROW(align_units(attribution({"a"}, {1}, UnitKind::feature), attribution({"a"}, {1})), Error);
  EXPECT_THROW(align_units(attribution({"a@0"}, {1}), attribution({"a@0"}, {1}, UnitKind::token, "other")),
               Error);
}

TEST(TopK, JaccardFixtures) {
  const Attribution a = attribution({"a", "b", "c", "d"}, {4, -3, 2, 1});
  EXPECT_EQ(topk_jaccard(a, a, 2), 1.0);
  const Attribution disjoint = attribution({"a", "b", "c", "d"}, {0.1, 0.2, 5, -6});
  EXPECT_EQ(topk_jaccard(a, disjoint, 2), 0.0);
  const Attribution one_shared = attribution({"a", "b", "c", "d"}, {9, 0, 8, 0});
  EXPECT_DOUBLE_EQ(topk_jaccard(a, one_shared, 2), 1.0 / 3.0);
  EXPECT_THROW(topk_jaccard(a, a, 0), Error);
  EXPECT_THROW(topk_jaccard(a, a, 5), Error);
}

TEST(TopK, TiesBreakByUnitId) {
  EXPECT_EQ(top_k_by_magnitude({"b", "a", "c"}, {1, -1, 0.5}, 1), std::vector<std::string>{"a"});
}

TEST(Sign, AgreementFixtures) {
  const Attribution a = attribution({"a", "b", "c", "d"}, {1, -2, 3, -4});
  EXPECT_EQ(sign_agreement(a, a), 1.0);
  EXPECT_EQ(sign_agreement(a, attribution({"a", "b", "c", "d"}, {-1, 2, -3, 4})), 0.0);
  EXPECT_EQ(sign_agreement(a, attribution({"a", "b", "c", "d"}, {1, -2, -3, 4})), 0.5);
  EXPECT_EQ(sign_agreement(attribution({"a", "b"}, {0, 1}), attribution({"a", "b"}, {0, 1})), 1.0);
  EXPECT_EQ(sign_agreement(attribution({"a", "b"}, {0, 1}), attribution({"a", "b"}, {1e-300, 1})), 0.5);
}

TEST(Plausibility, Fixtures) {
  const Attribution car = attribution({"seg9", "seg10", "seg3", "seg4"}, {0.4, 0.01, 0.3, -0.5},
                                      UnitKind::segment);
  HumanAnnotation grilles{"car1", {"seg9", "seg10"}};
  EXPECT_EQ(plausibility(car, grilles, 2), 0.5);
  EXPECT_EQ(plausibility(car, grilles, 3), 1.0);
  EXPECT_EQ(plausibility(car, HumanAnnotation{"car1", {"seg4"}}, 2), 0.0);
  EXPECT_THROW(plausibility(car, HumanAnnotation{"car1", {"seg99"}}, 2), Error);
}

TEST(DefaultTopK, ScalesWithUnitCount) {
  EXPECT_EQ(default_top_k(1), 1u);
  EXPECT_EQ(default_top_k(7), 3u);
  EXPECT_EQ(default_top_k(16), 5u);
  EXPECT_EQ(default_top_k(100), 5u);
}

// Property: metric ranges hold on random attribution pairs.
TEST(Metrics, StayInRange) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(10));
    std::vector<std::string> units;
    std::vector<double> a, b;
    for (int i = 0; i < m; ++i) {
      units.push_back("u" + std::to_string(i));
      a.push_back(testing::gaussian(rng));
      b.push_back(testing::gaussian(rng));
    }
    const double rho = spearman(a, b);
    ASSERT_GE(rho, -1.0);
    ASSERT_LE(rho, 1.0);
    const Attribution x = attribution(units, a), y = attribution(units, b);
    const std::size_t k = 1 + rng.below(m);
    const double j = topk_jaccard(x, y, k);
    ASSERT_GE(j, 0.0);
    ASSERT_LE(j, 1.0);
    ASSERT_EQ(topk_jaccard(x, y, k), topk_jaccard(y, x, k));
    const double s = sign_agreement(x, y);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
  }
}

EvaluationScenario tabular_scenario(const Model& model, Rng& rng, int samples, int columns) {
  EvaluationScenario s;
  s.id = "probe";
  s.model = &model;
  for (int i = 0; i < samples; ++i) s.samples.push_back({"s" + std::to_string(i), testing::random_row(rng, columns)});
  return s;
}

TEST(Report, SameMethodTwiceAgreesPerfectly) {
  Rng rng(2);
  const Model model = testing::random_mlp(rng, 5, 2, {4});
  const EvaluationScenario scenario = tabular_scenario(model, rng, 3, 5);
  const AgreementReport r = agreement_report(scenario, {Method::kernel_shap, Method::kernel_shap}, 2, {});
  ASSERT_EQ(r.pairs.size(), 3u);
  for (const auto& p : r.pairs) {
    EXPECT_EQ(*p.spearman, 1.0);
    EXPECT_EQ(p.topk_jaccard, 1.0);
    EXPECT_EQ(p.sign_agreement, 1.0);
  }
  EXPECT_EQ(r.samples_evaluated, 3u);
}

TEST(Report, AggregatesMatchPairs) {
  Rng rng(3);
  const Model model = testing::random_logistic(rng, 6, 3);
  EvaluationScenario scenario = tabular_scenario(model, rng, 4, 6);
  scenario.annotations["s1"] = HumanAnnotation{"s1", {"x0", "x2"}};
  const AgreementReport r = agreement_report(scenario, {Method::lime, Method::kernel_shap, Method::exact_shapley},
                                             std::nullopt, {});
  ASSERT_EQ(r.aggregates.size(), 3u);
  for (const auto& agg : r.aggregates) {
    double total = 0.0, lo = 2.0, hi = -2.0;
    std::size_t n = 0;
    for (const auto& p : r.pairs) {
      if (p.first != agg.first || p.second != agg.second) continue;
      total += p.topk_jaccard;
      lo = std::min(lo, p.topk_jaccard);
      hi = std::max(hi, p.topk_jaccard);
      ++n;
    }
    EXPECT_EQ(agg.topk_jaccard.count, n);
    EXPECT_NEAR(agg.topk_jaccard.mean, total / n, 1e-12);
    EXPECT_EQ(agg.topk_jaccard.min, lo);
    EXPECT_EQ(agg.topk_jaccard.max, hi);
  }
  EXPECT_EQ(r.plausibility.size(), 3u);
  for (const auto& p : r.plausibility) EXPECT_EQ(p.sample_id, "s1");
}

TEST(Report, NeedsTwoApplicableMethods) {
  Rng rng(4);
  const Model model = testing::random_tree(rng, 3, 2, 2);
  const EvaluationScenario scenario = tabular_scenario(model, rng, 2, 3);
  EXPECT_THROW(agreement_report(scenario, {Method::lime, Method::lrp}, std::nullopt, {}), Error);
  const AgreementReport r =
      agreement_report(scenario, {Method::lime, Method::lrp, Method::kernel_shap}, std::nullopt, {});
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].method, "lrp");
}

}  // namespace
}  // namespace xplain
