#include <gtest/gtest.h>

#include <cmath>

#include "actlogic/errors.hpp"
#include "actlogic/oracle.hpp"
#include "actlogic/scoring.hpp"
#include "support/generators.hpp"

using namespace actlogic;
using actlogic::testing::all_labels;

namespace {

MarginalMatrix row_of(std::vector<double> p) {
  const auto k = p.size();
  return MarginalMatrix(1, k, std::move(p));
}

std::vector<PartialAssignment> empty_fixed(std::size_t n, std::size_t k) {
  return std::vector<PartialAssignment>(n, PartialAssignment(k));
}

}  // namespace

TEST(Surprise, Values) {
  EXPECT_EQ(surprise(SurpriseKind::Linear, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(surprise(SurpriseKind::Linear, 0.3), 0.7);
  EXPECT_NEAR(surprise(SurpriseKind::Logarithmic, 0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(surprise(SurpriseKind::Logarithmic, 1.0), 0.0);
  EXPECT_NEAR(surprise(SurpriseKind::Logarithmic, 0.0), -std::log(kSurpriseEpsilon), 1e-9);
}

TEST(Surprise, DecreasingOnUnitInterval) {
  for (auto kind : {SurpriseKind::Linear, SurpriseKind::Logarithmic}) {
    double prev = surprise(kind, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = surprise(kind, i / 1000.0);
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(ScoreEntropy, Values) {
  const auto m = MarginalMatrix(1, 4, {0.5, 0.0, 1.0, 0.9});
  EXPECT_NEAR(score_entropy(m, LabelId{0}, 0), std::log(2.0), 1e-15);
  EXPECT_EQ(score_entropy(m, LabelId{1}, 0), 0.0);
  EXPECT_EQ(score_entropy(m, LabelId{2}, 0), 0.0);
  EXPECT_NEAR(score_entropy(m, LabelId{3}, 0), 0.3250829733914482, 1e-12);
}

TEST(ScoreProbability, Identity) {
  const auto m = MarginalMatrix(1, 3, {0.7, 0.0, 1.0});
  EXPECT_EQ(score_probability(m, LabelId{0}, 0), 0.7);
  EXPECT_EQ(score_probability(m, LabelId{1}, 0), 0.0);
  EXPECT_EQ(score_probability(m, LabelId{2}, 0), 1.0);
}

TEST(MarginalMatrix, RejectsOutOfRange) {
  EXPECT_THROW(MarginalMatrix(1, 2, {0.5, 1.5}), InvalidMarginals);
  EXPECT_THROW(MarginalMatrix(1, 2, {0.5}), InvalidMarginals);
  MarginalMatrix m(1, 2);
  EXPECT_THROW(m.set(0, LabelId{0}, -0.1), InvalidMarginals);
}

TEST(ScoreMe, HandValues) {
  const auto m = row_of({0.6, 0.3});
  const auto group = all_labels(2);
  EXPECT_NEAR(score_me(m, SurpriseKind::Linear, LabelId{0}, 0, group), 0.66, 1e-12);
  EXPECT_NEAR(score_me(m, SurpriseKind::Linear, LabelId{1}, 0, group), 0.60, 1e-12);
  const auto single = row_of({0.5});
  const LabelId only[] = {LabelId{0}};
  EXPECT_NEAR(score_me(single, SurpriseKind::Linear, LabelId{0}, 0, only), 0.5, 1e-15);
  EXPECT_NEAR(score_me(single, SurpriseKind::Logarithmic, LabelId{0}, 0, only), std::log(2.0), 1e-15);
}

TEST(ScoreMe, FixedMembersAddNoSurprise) {
  const auto m = row_of({0.6, 0.3, 0.05});
  const auto group = all_labels(3);
  PartialAssignment fixed(3);
  fixed.fix(Literal{LabelId{2}, false}, Origin::Requested);
  EXPECT_NEAR(score_me(m, SurpriseKind::Linear, LabelId{0}, 0, group, &fixed), 0.66, 1e-12);
}

TEST(ScoreConstraints, SubsumptionHandValues) {
  // labels: animal (p=0.7), bird (p=0.4)
  const ConstraintSet cs({"animal", "bird"}, {Subsumption{LabelId{0}, LabelId{1}}});
  const auto m = row_of({0.7, 0.4});
  const PartialAssignment none(2);
  EXPECT_NEAR(score_constraints(m, cs, SurpriseKind::Linear, LabelId{1}, 0, none), 0.60, 1e-12);
  EXPECT_NEAR(score_constraints(m, cs, SurpriseKind::Logarithmic, LabelId{1}, 0, none), 0.8156816445847495, 1e-12);

  const ConstraintSet lone({"x"}, {});
  EXPECT_NEAR(score_constraints(row_of({0.5}), lone, SurpriseKind::Linear, LabelId{0}, 0, PartialAssignment(1)), 0.5,
              1e-15);
}

TEST(ScoreConstraints, AlreadyFixedPairsAddNoSurprise) {
  const ConstraintSet cs({"animal", "bird"}, {Subsumption{LabelId{0}, LabelId{1}}});
  const auto m = row_of({0.7, 0.4});
  PartialAssignment fixed(2);
  fixed.fix(Literal{LabelId{0}, true}, Origin::Requested);
  // F(bird=1) = {bird=1} beyond the fixed animal=1
  EXPECT_NEAR(score_constraints(m, cs, SurpriseKind::Linear, LabelId{1}, 0, fixed), 0.4 * 0.6 + 0.6 * 0.4, 1e-12);
}

TEST(ScoreConstraints, EqualsMutualExclusionFormula) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + uniform_index(rng, 9);
    std::vector<double> p(k);
    for (auto& v : p) v = uniform01(rng);
    const auto m = row_of(p);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < k; ++j) names.push_back("L" + std::to_string(j));
    const auto cs = ConstraintSet::single_mutual_exclusion(names);
    const auto group = all_labels(k);
    PartialAssignment fixed(k);
    if (t % 2 == 1) fixed.fix(Literal{LabelId{static_cast<std::uint32_t>(uniform_index(rng, k))}, false}, Origin::Requested);
    for (auto kind : {SurpriseKind::Logarithmic, SurpriseKind::Linear})
      for (std::uint32_t j = 0; j < k; ++j) {
        if (fixed.is_fixed(LabelId{j})) continue;
        const double a = score_constraints(m, cs, kind, LabelId{j}, 0, fixed);
        const double b = score_me(m, kind, LabelId{j}, 0, group, &fixed);
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)));
        if (fixed.empty()) EXPECT_EQ(a, b);
      }
  }
}

TEST(ScoreConstraints, FiniteAndNonNegative) {
  const auto m = row_of({0.0, 1.0, 0.0});
  const auto cs = ConstraintSet::single_mutual_exclusion({"a", "b", "c"});
  for (auto kind : {SurpriseKind::Logarithmic, SurpriseKind::Linear})
    for (std::uint32_t j = 0; j < 3; ++j) {
      const double s = score_constraints(m, cs, kind, LabelId{j}, 0, PartialAssignment(3));
      EXPECT_TRUE(std::isfinite(s));
      EXPECT_GE(s, 0.0);
    }
}

TEST(ScoringMethod, ParsesCatalogAndRejectsOthers) {
  for (auto name : kMethodNames) EXPECT_EQ(ScoringMethod::parse(name).name(), name);
  try {
    ScoringMethod::parse("uncertainty");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    for (auto name : kMethodNames) EXPECT_NE(std::string(e.what()).find(name), std::string::npos);
  }
}

TEST(ScoringMethod, ValidatesAgainstConstraintSet) {
  const auto me = ConstraintSet::single_mutual_exclusion({"a", "b"});
  const ConstraintSet sub({"a", "b"}, {Subsumption{LabelId{0}, LabelId{1}}});
  const ScoringMethod me_surprise{ScoreKind::MutualExclusionSurprise, SurpriseKind::Linear, true};
  EXPECT_NO_THROW(me_surprise.validate(me));
  EXPECT_THROW(me_surprise.validate(sub), ConfigError);
  const ScoringMethod bare_probability{ScoreKind::Probability, SurpriseKind::Linear, false};
  EXPECT_THROW(bare_probability.validate(me), ConfigError);
}

TEST(SelectNext, ProbabilityAndEntropyExamples) {
  const auto m = row_of({0.9, 0.2});
  const auto cs = ConstraintSet::single_mutual_exclusion({"Y1", "Y2"});
  const auto fixed = empty_fixed(1, 2);
  Rng rng(0);
  const auto p = select_next(m, cs, ScoringMethod::parse("probability-cp"), fixed, rng);
  EXPECT_EQ(p.label, LabelId{0});
  EXPECT_EQ(p.instance, 0u);
  const auto e = select_next(m, cs, ScoringMethod::parse("entropy"), fixed, rng);
  EXPECT_EQ(e.label, LabelId{1});
}

TEST(SelectNext, TiesGoToLowestInstanceThenLabel) {
  MarginalMatrix m(3, 2, {0.1, 0.4, 0.4, 0.4, 0.4, 0.1});
  const ConstraintSet cs({"a", "b"}, {});
  const auto fixed = empty_fixed(3, 2);
  Rng rng(0);
  const auto s = select_next(m, cs, ScoringMethod::parse("probability-cp"), fixed, rng);
  EXPECT_EQ(s.instance, 0u);
  EXPECT_EQ(s.label, LabelId{1});
  m.set_eligible(0, LabelId{1}, false);
  const auto t = select_next(m, cs, ScoringMethod::parse("probability-cp"), fixed, rng);
  EXPECT_EQ(t.instance, 1u);
  EXPECT_EQ(t.label, LabelId{0});
}

TEST(SelectNext, PoolExhausted) {
  MarginalMatrix m(1, 2);
  m.set_row_eligible(0, false);
  Rng rng(0);
  EXPECT_THROW(select_next(m, ConstraintSet({"a", "b"}, {}), ScoringMethod::parse("entropy"), empty_fixed(1, 2), rng),
               PoolExhausted);
}

TEST(SelectNext, RandomIsSeedDeterministic) {
  Rng gen(9);
  std::vector<double> p(20 * 4);
  for (auto& v : p) v = uniform01(gen);
  const MarginalMatrix m(20, 4, p);
  const ConstraintSet cs({"a", "b", "c", "d"}, {});
  const auto fixed = empty_fixed(20, 4);
  Rng r1(17), r2(17);
  for (int t = 0; t < 10; ++t) {
    const auto a = select_next(m, cs, ScoringMethod::parse("random"), fixed, r1);
    const auto b = select_next(m, cs, ScoringMethod::parse("random"), fixed, r2);
    EXPECT_EQ(a, b);
  }
}

// Whenever the largest marginal is also the one closest to 1/2, entropy and
// probability pick pairs with equal entropy.
TEST(SelectNext, EntropyProbabilityDuality) {
  Rng rng(101);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 5);
    const std::size_t k = 2 + uniform_index(rng, 4);
    const double top = (t % 2 == 0) ? 0.5 : 1.0;
    std::vector<double> p(n * k);
    for (auto& v : p) v = top * uniform01(rng);
    const MarginalMatrix m(n, k, p);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < k; ++j) names.push_back("L" + std::to_string(j));
    const ConstraintSet free_labels(names, {});
    const auto fixed = empty_fixed(n, k);
    Rng unused(0);
    const auto by_p = select_next(m, free_labels, ScoringMethod::parse("probability-cp"), fixed, unused);
    const double closest = *std::min_element(p.begin(), p.end(), [](double a, double b) {
      return std::abs(a - 0.5) < std::abs(b - 0.5);
    });
    if (std::abs(m.at(by_p.instance, by_p.label) - 0.5) != std::abs(closest - 0.5)) continue;
    ++checked;
    const auto by_h = select_next(m, free_labels, ScoringMethod::parse("entropy"), fixed, unused);
    EXPECT_NEAR(binary_entropy(m.at(by_h.instance, by_h.label)), binary_entropy(m.at(by_p.instance, by_p.label)),
                1e-15);
  }
  EXPECT_GE(checked, 400);
}

TEST(SelectNext, SingleInstanceArgmaxSetsCoincide) {
  Rng rng(202);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + uniform_index(rng, 9);
    const auto p = random_me_marginals(k, rng);
    const auto best_p = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    double best_h = 0.0;
    for (double v : p) best_h = std::max(best_h, binary_entropy(v));
    EXPECT_NEAR(binary_entropy(p[best_p]), best_h, 1e-12) << "trial " << t;
  }
}

TEST(SelectNext, ProbabilityRankingMatchesInformationGain) {
  Rng rng(303);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + uniform_index(rng, 5);
    const auto p = random_me_marginals(k, rng);
    EXPECT_TRUE(rankings_agree(p, me_information_gains(p), 1e-9)) << "trial " << t;
  }
}
