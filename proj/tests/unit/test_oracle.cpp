#include <gtest/gtest.h>

#include <cmath>

#include "actlogic/errors.hpp"
#include "actlogic/oracle.hpp"
#include "actlogic/scoring.hpp"
#include "support/generators.hpp"

using namespace actlogic;
using actlogic::testing::random_constraint_graph;

TEST(JointFromMe, Construction) {
  const double p[] = {0.5, 0.3};
  const auto j = joint_from_me_marginals(p);
  using V = std::vector<std::vector<std::uint8_t>>;
  EXPECT_EQ(j.support, (V{{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_DOUBLE_EQ(j.mass[0], 0.5);
  EXPECT_DOUBLE_EQ(j.mass[1], 0.3);
  EXPECT_NEAR(j.mass[2], 0.2, 1e-15);

  const double one[] = {1.0};
  const auto k = joint_from_me_marginals(one);
  EXPECT_EQ(k.mass, (std::vector<double>{1.0, 0.0}));

  const double over[] = {0.5, 0.6};
  EXPECT_THROW(joint_from_me_marginals(over), InvalidMarginals);
}

TEST(MarginalsFromJoint, RoundTripAndPointMass) {
  const double p[] = {0.5, 0.3};
  const auto back = marginals_from_joint(joint_from_me_marginals(p));
  EXPECT_DOUBLE_EQ(back[0], 0.5);
  EXPECT_DOUBLE_EQ(back[1], 0.3);

  JointDistribution zero{3, {{0, 0, 0}}, {1.0}};
  EXPECT_EQ(marginals_from_joint(zero), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(MarginalsFromJoint, UniformOverAnimalFragment) {
  const ConstraintSet cs({"animal", "bird", "fish", "mammal"},
                         {Subsumption{LabelId{0}, LabelId{1}}, Subsumption{LabelId{0}, LabelId{2}},
                          Subsumption{LabelId{0}, LabelId{3}}, MutualExclusion{{LabelId{1}, LabelId{2}, LabelId{3}}}});
  JointDistribution j;
  j.num_labels = 4;
  j.support = enumerate_valid_assignments(cs);
  j.mass.assign(j.support.size(), 1.0 / static_cast<double>(j.support.size()));
  const auto p = marginals_from_joint(j);
  EXPECT_NEAR(p[0], 4.0 / 5.0, 1e-15);
  for (int c = 1; c <= 3; ++c) EXPECT_NEAR(p[c], 1.0 / 5.0, 1e-15);
}

TEST(RandomValidJoint, NormalisedDeterministicAndFrozen) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto cs = random_constraint_graph(rng, 8);
    Rng a(t), b(t);
    const auto ja = random_valid_joint(cs, a);
    EXPECT_NO_THROW(ja.validate(&cs));
    EXPECT_EQ(ja.mass, random_valid_joint(cs, b).mass);
  }

  const auto ab = ConstraintSet::single_mutual_exclusion({"A", "B"});
  Rng seven(7);
  const auto j = random_valid_joint(ab, seven);
  ASSERT_EQ(j.mass.size(), 3u);
  // Regression values for the portable generator.
  EXPECT_DOUBLE_EQ(j.mass[0], 0.11383692861456687);
  EXPECT_DOUBLE_EQ(j.mass[1], 0.021013996764741864);
  EXPECT_DOUBLE_EQ(j.mass[2], 0.86514907462069124);
}

TEST(InformationGain, TwoLabelsAreSymmetric) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_me_marginals(2, rng);
    const auto j = joint_from_me_marginals(p);
    EXPECT_NEAR(exact_information_gain(j, LabelId{0}), exact_information_gain(j, LabelId{1}), 1e-12);
  }
}

TEST(InformationGain, ThreeLabelReferenceValues) {
  const double p[] = {0.5, 0.3, 0.1};
  const auto j = joint_from_me_marginals(p);
  EXPECT_NEAR(exact_information_gain(j, LabelId{0}), 0.42281045524016236, 1e-12);
  EXPECT_NEAR(exact_information_gain(j, LabelId{1}), 0.3859302442073702, 1e-12);
  EXPECT_NEAR(exact_information_gain(j, LabelId{2}), 0.18645353727945935, 1e-12);
}

TEST(InformationGain, IndependentLabelHasZeroGain) {
  // product of P(Y0=1)=0.3 and P(Y1=1)=0.8
  JointDistribution j{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.7 * 0.2, 0.7 * 0.8, 0.3 * 0.2, 0.3 * 0.8}};
  EXPECT_NEAR(exact_information_gain(j, LabelId{0}), 0.0, 1e-15);
  EXPECT_NEAR(exact_information_gain(j, LabelId{1}), 0.0, 1e-15);
}

TEST(InformationGain, NonNegativeAndBoundedByChain) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto cs = random_constraint_graph(rng, 8);
    const auto j = random_valid_joint(cs, rng);
    for (std::uint32_t k = 0; k < cs.num_labels(); ++k) {
      const double ig = exact_information_gain(j, LabelId{k});
      EXPECT_GE(ig, -1e-12);
      double on = 0.0;
      for (std::size_t s = 0; s < j.support.size(); ++s)
        if (j.support[s][k]) on += j.mass[s];
      const double h_k[] = {on, 1.0 - on};
      EXPECT_LE(ig, entropy(h_k) + 1e-12);
    }
  }
}

TEST(Decomposition, UnconstrainedLabelReducesToEntropyIdentity) {
  JointDistribution j{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.1, 0.2, 0.3, 0.4}};
  const ConstraintSet cs({"a", "b"}, {});
  const auto d = ig_decomposition(j, cs, LabelId{0});
  EXPECT_EQ(d.constraints, 0.0);
  const double h_k[] = {0.7, 0.3};
  EXPECT_NEAR(d.entropy, entropy(h_k), 1e-15);
  EXPECT_NEAR(d.total(), exact_information_gain(j, LabelId{0}), 1e-12);
}

TEST(Decomposition, SubsumptionConstraintTermIsLogSurprise) {
  const ConstraintSet cs({"parent", "child"}, {Subsumption{LabelId{0}, LabelId{1}}});
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto j = random_valid_joint(cs, rng);
    const auto p = marginals_from_joint(j);
    const auto d = ig_decomposition(j, cs, LabelId{1});
    EXPECT_NEAR(d.constraints, p[1] * surprise(SurpriseKind::Logarithmic, p[0]), 1e-12);
  }
}

TEST(Decomposition, ReconstructsInformationGain) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto cs = random_constraint_graph(rng, 8);
    const auto j = random_valid_joint(cs, rng);
    for (std::uint32_t k = 0; k < cs.num_labels(); ++k) {
      const auto d = ig_decomposition(j, cs, LabelId{k});
      EXPECT_NEAR(d.total(), exact_information_gain(j, LabelId{k}), 1e-9) << "trial " << t << " label " << k;
    }
  }
  for (int t = 0; t < 100; ++t) {
    const auto p = random_me_marginals(2 + uniform_index(rng, 7), rng);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < p.size(); ++k) names.push_back("L" + std::to_string(k));
    const auto cs = ConstraintSet::single_mutual_exclusion(names);
    const auto j = joint_from_me_marginals(p);
    for (std::uint32_t k = 0; k < p.size(); ++k)
      EXPECT_NEAR(ig_decomposition(j, cs, LabelId{k}).total(), exact_information_gain(j, LabelId{k}), 1e-9);
  }
}

TEST(Decomposition, CapExceeded) {
  std::vector<std::string> names;
  for (int k = 0; k < 9; ++k) names.push_back("L" + std::to_string(k));
  const ConstraintSet cs(names, {});
  JointDistribution j{9, {std::vector<std::uint8_t>(9, 0)}, {1.0}};
  EXPECT_THROW(ig_decomposition(j, cs, LabelId{0}), CapExceeded);
}

TEST(XlogxShift, NonDecreasingInX) {
  int violations = 0;
  for (int ci = 0; ci < 40; ++ci) {
    for (int xi = 0; xi + 1 < 25; ++xi) {
      const double x0 = 0.99 * xi / 24.0;
      const double x1 = 0.99 * (xi + 1) / 24.0;
      const double c = (1.0 - x1) * ci / 39.0;
      if (xlogx_shift(x1, c) < xlogx_shift(x0, c) - 1e-12) ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(RankingsAgree, DetectsInversions) {
  const double p[] = {0.5, 0.3, 0.1};
  const double good[] = {0.4, 0.3, 0.2};
  const double bad[] = {0.2, 0.3, 0.4};
  const double tied[] = {0.4, 0.3, 0.3};
  EXPECT_TRUE(rankings_agree(p, good, 1e-9));
  EXPECT_FALSE(rankings_agree(p, bad, 1e-9));
  EXPECT_TRUE(rankings_agree(p, tied, 1e-9));
}
