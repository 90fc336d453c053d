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

#ifndef ALLOCFLOW_GEN_HPP_
#define ALLOCFLOW_GEN_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"

namespace allocflow {
namespace detail {

// Standard normal via Box-Muller on explicitly constructed uniforms, so a
// seed pins the sample stream without relying on the (implementation-
// defined) std::normal_distribution algorithm.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace detail

/// Synthetic outcome matrix for experiments and benchmarks:
///   Y[i][j] = (1 - h) * (base_i + effect_j) + h * interaction_ij
/// with independent standard-normal draws and h = heterogeneity in [0, 1].
/// At h = 0 every recipient ranks treatments identically (greedy matches
/// the optimum); at h = 1 preferences are fully idiosyncratic. Entries are
/// rounded to six decimals so that the default cost scale of 10^6
/// reproduces them exactly, making quantization error zero.
inline std::vector<std::vector<double>> generate_outcomes(
    int num_treatments, int num_recipients, double heterogeneity,
    std::uint64_t seed) {
  if (num_treatments < 0 || num_recipients < 0 || heterogeneity < 0.0 ||
      heterogeneity > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sizes must be non-negative and heterogeneity in [0, 1]");
  }
  detail::NormalSampler normal(seed);
  std::vector<double> base(num_recipients);
  for (double& v : base) v = normal();
  std::vector<double> effect(num_treatments);
  for (double& v : effect) v = normal();

  std::vector<std::vector<double>> outcomes(
      num_recipients, std::vector<double>(num_treatments));
  const double mix = 1.0 - heterogeneity;
  for (int i = 0; i < num_recipients; ++i) {
    for (int j = 0; j < num_treatments; ++j) {
      const double y = mix * (base[i] + effect[j]) + heterogeneity * normal();
      outcomes[i][j] = std::round(y * 1e6) / 1e6;
    }
  }
  return outcomes;
}

/// Convenience wrapper bundling generated outcomes with uniform
/// capacities of ceil(n2 / n1) per treatment (the tightest uniform
/// capacity that keeps the instance feasible).
inline ProblemInstance generate_instance(int num_treatments,
                                         int num_recipients,
                                         double heterogeneity,
                                         std::uint64_t seed) {
  ProblemInstance instance;
  instance.outcomes =
      generate_outcomes(num_treatments, num_recipients, heterogeneity, seed);
  const std::int64_t uniform =
      num_treatments == 0
          ? 0
          : (num_recipients + num_treatments - 1) / num_treatments;
  instance.capacities.assign(num_treatments, uniform);
  return instance;
}

}  // namespace allocflow

#endif  // ALLOCFLOW_GEN_HPP_
