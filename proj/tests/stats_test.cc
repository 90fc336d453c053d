// Copyright 2026 The allocflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "allocflow/stats.hpp"

#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace allocflow {
namespace {

GroupedOutcomes one_group(std::vector<GroupedOutcomes::Arm> arms) {
  GroupedOutcomes data;
  data.groups.push_back({"g0", std::move(arms)});
  return data;
}

TEST(AvgAbsDifference, SinglePair) {
  const auto data = one_group({{"a", {1, 3}}, {"b", {5, 7}}});
  EXPECT_DOUBLE_EQ(avg_abs_difference(data), 4.0);
}

TEST(AvgAbsDifference, IdenticalArmsGiveZero) {
  const auto data = one_group({{"a", {2, 4}}, {"b", {4, 2}}});
  EXPECT_DOUBLE_EQ(avg_abs_difference(data), 0.0);
}

TEST(AvgAbsDifference, PoolsPairsAcrossGroups) {
  GroupedOutcomes data;
  data.groups.push_back({"g0", {{"a", {0}}, {"b", {4}}}});
  data.groups.push_back({"g1", {{"a", {1}}, {"b", {3}}}});
  EXPECT_DOUBLE_EQ(avg_abs_difference(data), 3.0);
}

TEST(AvgAbsDifference, SingleArmGroupsContributeNothing) {
  GroupedOutcomes data;
  data.groups.push_back({"g0", {{"a", {0}}, {"b", {4}}}});
  data.groups.push_back({"solo", {{"a", {100}}}});
  EXPECT_DOUBLE_EQ(avg_abs_difference(data), 4.0);
}

TEST(AvgAbsDifference, WeightingModesDiffer) {
  GroupedOutcomes data;
  data.groups.push_back(
      {"g0", {{"a", {0}}, {"b", {2}}, {"c", {4}}}});  // pairs: 2, 4, 2
  data.groups.push_back({"g1", {{"a", {10}}, {"b", {20}}}});  // pair: 10
  EXPECT_DOUBLE_EQ(avg_abs_difference(data, PairWeighting::kPooledPairs),
                   (2 + 4 + 2 + 10) / 4.0);
  EXPECT_DOUBLE_EQ(avg_abs_difference(data, PairWeighting::kPerGroup),
                   (8 / 3.0 + 10.0) / 2.0);
}

TEST(AvgAbsDifference, ThrowsWhenNoGroupHasTwoArms) {
  const auto data = one_group({{"a", {1, 2, 3}}});
  try {
    avg_abs_difference(data);
    FAIL() << "expected NoPairs";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPairs);
  }
}

TEST(PermutationTest, ExactTwoArmSplitProbability) {
  // Pool {0,0,0,10,10,10}, arm sizes 3/3: of the 20 equally likely splits
  // exactly 2 reproduce |mean difference| >= 10, so p = 0.1 exactly; the
  // Monte-Carlo estimate must fall within 3 binomial standard errors.
  const auto data = one_group({{"a", {0, 0, 0}}, {"b", {10, 10, 10}}});
  const auto report = permutation_test(data, 10'000, 42);
  EXPECT_DOUBLE_EQ(report.observed, 10.0);
  const double se = std::sqrt(0.1 * 0.9 / 10'000);
  EXPECT_NEAR(report.p_value, 0.1, 3 * se);
  EXPECT_GT(report.excess, 0.0);
}

TEST(PermutationTest, DeterministicPerSeed) {
  const auto data = one_group({{"a", {1.5, 2.5, 9}}, {"b", {4, 5, 6, 7}}});
  const auto first = permutation_test(data, 500, 7);
  const auto second = permutation_test(data, 500, 7);
  EXPECT_EQ(permutation_report_text(first), permutation_report_text(second));
  const auto other_seed = permutation_test(data, 500, 8);
  EXPECT_NE(permutation_report_text(first).find("p_value"),
            std::string::npos);
  // Different seeds almost surely permute differently somewhere.
  EXPECT_NE(permutation_report_text(first),
            permutation_report_text(other_seed));
}

TEST(PermutationTest, ThreadCountDoesNotChangeResult) {
  GroupedOutcomes data;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int g = 0; g < 4; ++g) {
    GroupedOutcomes::Group group{"g" + std::to_string(g), {}};
    for (int a = 0; a < 3; ++a) {
      GroupedOutcomes::Arm arm{"a" + std::to_string(a), {}};
      for (int k = 0; k < 6; ++k) arm.values.push_back(noise(rng) + a);
      group.arms.push_back(std::move(arm));
    }
    data.groups.push_back(std::move(group));
  }
  const auto serial = permutation_test(data, 400, 11, PairWeighting::kPooledPairs, 1);
  const auto parallel = permutation_test(data, 400, 11, PairWeighting::kPooledPairs, 4);
  EXPECT_EQ(permutation_report_text(serial), permutation_report_text(parallel));
}

TEST(PermutationTest, SingleReplicateGivesZeroOrOne) {
  const auto data = one_group({{"a", {1, 2}}, {"b", {3, 4}}});
  const auto report = permutation_test(data, 1, 19);
  EXPECT_TRUE(report.p_value == 0.0 || report.p_value == 1.0);
}

TEST(PermutationTest, SeparatedArmsGiveTinyPValue) {
  const auto data = one_group(
      {{"a", {0.0, 0.1, 0.2, 0.05, 0.15, 0.1, 0.0, 0.2}},
       {"b", {10.0, 10.1, 10.2, 10.05, 10.15, 10.1, 10.0, 10.2}}});
  const auto report = permutation_test(data, 1000, 1);
  EXPECT_LE(report.p_value, 0.005);
  EXPECT_GT(report.excess, 0.0);
  EXPECT_LT(report.excess, report.observed);
}

TEST(PermutationTest, ExcessShrinksAsArmsGrow) {
  // Under exchangeability the observed statistic is a draw from the
  // replicate distribution, so the excess is noise whose scale falls with
  // the per-arm sample size.
  auto mean_abs_excess = [](int obs_per_arm) {
    double sum = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(100 + seed);
      std::normal_distribution<double> noise(0.0, 1.0);
      GroupedOutcomes data;
      GroupedOutcomes::Group group{"g", {}};
      for (int a = 0; a < 3; ++a) {
        GroupedOutcomes::Arm arm{"n" + std::to_string(a), {}};
        for (int k = 0; k < obs_per_arm; ++k) arm.values.push_back(noise(rng));
        group.arms.push_back(std::move(arm));
      }
      data.groups.push_back(std::move(group));
      sum += std::abs(permutation_test(data, 300, seed).excess);
    }
    return sum / 10;
  };
  EXPECT_LT(mean_abs_excess(64), mean_abs_excess(4));
}

TEST(PermutationTest, RejectsZeroReplicates) {
  const auto data = one_group({{"a", {1}}, {"b", {2}}});
  try {
    permutation_test(data, 0, 0);
    FAIL() << "expected invalid argument";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(HolmSidak, AdjustsAndPreservesOrder) {
  const auto adjusted = holm_sidak_adjust({0.01, 0.04, 0.03});
  ASSERT_EQ(adjusted.size(), 3u);
  EXPECT_NEAR(adjusted[0], 1 - std::pow(0.99, 3), 1e-12);
  EXPECT_NEAR(adjusted[1], 1 - std::pow(0.97, 2), 1e-12);  // capped by rank 2
  EXPECT_NEAR(adjusted[2], 1 - std::pow(0.97, 2), 1e-12);
}

TEST(HolmSidak, EmptyAndSingle) {
  EXPECT_TRUE(holm_sidak_adjust({}).empty());
  const auto single = holm_sidak_adjust({0.2});
  EXPECT_DOUBLE_EQ(single[0], 0.2);
}

TEST(CompareMechanisms, WorkedTwoByTwo) {
  ProblemInstance instance;
  instance.outcomes = {{5, 4}, {5, 1}};
  instance.capacities = {1, 1};
  instance.cost_scale = 1;
  const auto comparison = compare_mechanisms(instance, Allocation{{0, 1}});
  EXPECT_DOUBLE_EQ(comparison.actual.mean, 3.0);
  EXPECT_DOUBLE_EQ(comparison.greedy.mean, 3.0);
  EXPECT_DOUBLE_EQ(comparison.optimal.mean, 4.5);
  EXPECT_DOUBLE_EQ(comparison.pareto.mean, 3.0);
}

TEST(CompareMechanisms, OptimalActualIsFixedPoint) {
  ProblemInstance instance;
  instance.outcomes = {{5, 4}, {5, 1}};
  instance.capacities = {1, 1};
  instance.cost_scale = 1;
  const auto comparison = compare_mechanisms(instance, Allocation{{1, 0}});
  EXPECT_DOUBLE_EQ(comparison.actual.mean, comparison.optimal.mean);
  EXPECT_DOUBLE_EQ(comparison.pareto.mean, comparison.optimal.mean);
}

TEST(CompareMechanisms, SingleTreatmentCollapsesEverything) {
  ProblemInstance instance;
  instance.outcomes = {{2}, {3}};
  instance.capacities = {2};
  instance.cost_scale = 1;
  const auto comparison = compare_mechanisms(instance, Allocation{{0, 0}});
  EXPECT_DOUBLE_EQ(comparison.actual.mean, comparison.greedy.mean);
  EXPECT_DOUBLE_EQ(comparison.actual.mean, comparison.optimal.mean);
  EXPECT_DOUBLE_EQ(comparison.actual.mean, comparison.pareto.mean);
}

TEST(CompareMechanisms, OrderingHoldsOnFuzzedInstances) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto actual = testing::random_feasible_allocation(instance, rng);
    const auto comparison = compare_mechanisms(instance, actual);
    EXPECT_LE(comparison.actual.mean, comparison.pareto.mean + 1e-12);
    EXPECT_LE(comparison.pareto.mean, comparison.optimal.mean + 1e-12);
    EXPECT_LE(comparison.greedy.mean, comparison.optimal.mean + 1e-12);
  }
}

}  // namespace
}  // namespace allocflow
