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

#include "allocflow/model.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace allocflow {
namespace {

ProblemInstance make_instance(std::vector<std::vector<double>> outcomes,
                              std::vector<std::int64_t> capacities) {
  ProblemInstance instance;
  instance.outcomes = std::move(outcomes);
  instance.capacities = std::move(capacities);
  instance.cost_scale = 1;
  return instance;
}

TEST(Validate, AcceptsWellFormedInstance) {
  const auto instance = make_instance({{1.0, 2.0}, {3.0, 4.0}}, {1, 1});
  EXPECT_FALSE(validate(instance).has_value());
}

TEST(Validate, RejectsNaN) {
  const auto instance = make_instance(
      {{1.0, std::numeric_limits<double>::quiet_NaN()}, {3.0, 4.0}}, {1, 1});
  auto err = validate(instance);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kNonFiniteOutcome);
}

TEST(Validate, RejectsInfinity) {
  const auto instance = make_instance(
      {{std::numeric_limits<double>::infinity()}}, {1});
  auto err = validate(instance);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kNonFiniteOutcome);
}

TEST(Validate, RejectsCapacityLengthMismatch) {
  const auto instance = make_instance({{1.0, 2.0}, {3.0, 4.0}}, {1, 1, 1});
  auto err = validate(instance);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kCapacityLengthMismatch);
}

TEST(Validate, RejectsRaggedMatrix) {
  const auto instance = make_instance({{1.0, 2.0}, {3.0}}, {1, 1});
  auto err = validate(instance);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kNonRectangular);
}

TEST(Validate, RejectsNegativeCapacity) {
  const auto instance = make_instance({{1.0, 2.0}}, {1, -1});
  auto err = validate(instance);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kNegativeCapacity);
}

TEST(FeasibilityCheck, SingleTreatmentDeficit) {
  // m|V1| = 1 < |V2| = 2: no allocation exists.
  const auto instance = make_instance({{1.0}, {2.0}}, {1});
  EXPECT_FALSE(has_feasible_allocation(instance));
}

TEST(FeasibilityCheck, ExactCover) {
  const auto instance = make_instance({{1.0, 2.0}, {3.0, 4.0}}, {1, 1});
  EXPECT_TRUE(has_feasible_allocation(instance));
}

TEST(FeasibilityCheck, ZeroCapacityTreatmentsDoNotCount) {
  const auto instance = make_instance(
      {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, {0, 0, 5});
  EXPECT_TRUE(has_feasible_allocation(instance));
}

TEST(FeasibilityCheck, MonotoneInCapacities) {
  std::mt19937_64 rng(7);
  testing::FuzzOptions options;
  options.ensure_feasible = false;
  for (int trial = 0; trial < 200; ++trial) {
    auto instance = testing::random_instance(rng, options);
    const bool before = has_feasible_allocation(instance);
    instance.capacities[trial % instance.capacities.size()] += 1;
    if (before) {
      EXPECT_TRUE(has_feasible_allocation(instance));
    }
  }
}

TEST(AllocationValue, DirectSum) {
  const auto instance = make_instance({{5.0, 1.0}, {1.0, 5.0}}, {1, 1});
  const auto value = allocation_value(instance, Allocation{{0, 1}});
  EXPECT_DOUBLE_EQ(value.total, 10.0);
  EXPECT_DOUBLE_EQ(value.mean, 5.0);
}

TEST(AllocationValue, CrossAssignment) {
  const auto instance = make_instance({{5.0, 4.0}, {5.0, 1.0}}, {1, 1});
  const auto value = allocation_value(instance, Allocation{{1, 0}});
  EXPECT_DOUBLE_EQ(value.total, 9.0);
}

TEST(AllocationValue, SingleCell) {
  const auto instance = make_instance({{-2.75}}, {1});
  const auto value = allocation_value(instance, Allocation{{0}});
  EXPECT_DOUBLE_EQ(value.total, -2.75);
  EXPECT_DOUBLE_EQ(value.mean, -2.75);
}

TEST(AllocationValue, RejectsCapacityViolation) {
  const auto instance = make_instance({{5.0, 1.0}, {1.0, 5.0}}, {1, 1});
  try {
    allocation_value(instance, Allocation{{0, 0}});
    FAIL() << "expected capacity violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacityViolated);
  }
}

TEST(AllocationValue, RejectsBadIndex) {
  const auto instance = make_instance({{5.0, 1.0}}, {1, 1});
  try {
    allocation_value(instance, Allocation{{2}});
    FAIL() << "expected index error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(AllocationValue, MeanTimesCountEqualsTotal) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto alloc = testing::random_feasible_allocation(instance, rng);
    const auto value = allocation_value(instance, alloc);
    const int n2 = instance.num_recipients();
    if (n2 > 0) {
      EXPECT_NEAR(value.mean * n2, value.total,
                  1e-9 * std::max(1.0, std::abs(value.total)));
    } else {
      EXPECT_EQ(value.total, 0.0);
    }
  }
}

TEST(AllocationValue, InvariantUnderRecipientPermutation) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto instance = testing::random_instance(rng);
    const int n2 = instance.num_recipients();
    auto alloc = testing::random_feasible_allocation(instance, rng);

    std::vector<int> perm(n2);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    ProblemInstance permuted = instance;
    Allocation permuted_alloc = alloc;
    for (int i = 0; i < n2; ++i) {
      permuted.outcomes[perm[i]] = instance.outcomes[i];
      permuted_alloc.assignment[perm[i]] = alloc.assignment[i];
    }
    EXPECT_DOUBLE_EQ(allocation_value(instance, alloc).total,
                     allocation_value(permuted, permuted_alloc).total);
  }
}

TEST(AllocationValue, ShiftAddsConstantTimesCount) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto alloc = testing::random_feasible_allocation(instance, rng);
    const double c = 3.0;
    ProblemInstance shifted = instance;
    for (auto& row : shifted.outcomes) {
      for (auto& y : row) y += c;
    }
    EXPECT_DOUBLE_EQ(
        allocation_value(shifted, alloc).total,
        allocation_value(instance, alloc).total + c * instance.num_recipients());
  }
}

}  // namespace
}  // namespace allocflow
