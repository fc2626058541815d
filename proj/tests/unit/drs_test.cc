// Copyright 2026 The SDCC Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdcc/drs.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "sdcc/error.h"
#include "test_util.h"

namespace sdcc {
namespace {

using ::sdcc::testing::Gen;

// 2^2.3, computed to 30 digits with mpmath and rounded to double.
constexpr double kTwoPow2_3 = 4.924577653379665;

// Exhaustive linear scans, ties toward the higher-fidelity candidate.
double RatioOracle(double r_hat, const std::vector<double>& cands) {
  double best = cands.front();
  double best_d = std::abs(std::log2(r_hat) - std::log2(best));
  for (double c : cands) {
    const double d = std::abs(std::log2(r_hat) - std::log2(c));
    if (d < best_d - 1e-12) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

std::size_t LengthOracle(double r_hat, std::size_t l,
                         const std::vector<std::size_t>& cands) {
  const double m_hat = static_cast<double>(l) / r_hat;
  std::size_t best = cands.front();
  double best_d = std::abs(m_hat - static_cast<double>(best));
  for (std::size_t c : cands) {
    const double d = std::abs(m_hat - static_cast<double>(c));
    if (d <= best_d + 1e-12 * std::max(1.0, m_hat)) {
      best = c;
      best_d = std::min(best_d, d);
    }
  }
  return best;
}

TEST(ApplyScaleTest, AddsTheBias) {
  EXPECT_EQ(ApplyScale(2.3, 0.0), 2.3);
  EXPECT_EQ(ApplyScale(2.3, 1.5), 2.3 + 1.5);
  EXPECT_NEAR(ApplyScale(2.3, 1.5), 3.8, 1e-15);
  EXPECT_NEAR(ApplyScale(2.3, -2.0), 0.3, 1e-15);
  EXPECT_THROW(ApplyScale(std::nan(""), 0.0), Error);
  EXPECT_THROW(ApplyScale(1.0, INFINITY), Error);
}

TEST(ToFactorTest, Exponentiates) {
  EXPECT_EQ(ToFactor(0.0), 1.0);
  EXPECT_EQ(ToFactor(3.0), 8.0);
  EXPECT_NEAR(ToFactor(2.3), kTwoPow2_3, 1e-14);
  // Long-double reference as a second opinion.
  EXPECT_NEAR(ToFactor(2.3), static_cast<double>(std::exp2(2.3L)), 1e-14);
}

TEST(ToFactorTest, GuardsOverflow) {
  EXPECT_NO_THROW(ToFactor(60.0));
  EXPECT_NO_THROW(ToFactor(-60.0));
  EXPECT_THROW(ToFactor(60.5), Error);
  EXPECT_THROW(ToFactor(-61.0), Error);
  EXPECT_THROW(ToFactor(std::nan("")), Error);
}

TEST(QuantizeRatioTest, ExampleNearFiveRoundsToFour) {
  const RatioCandidates r = RatioCandidates::Default();
  EXPECT_EQ(QuantizeRatio(4.925, r), 4.0);
  EXPECT_NEAR(std::log2(4.925) - 1.0, 1.30, 0.005);
  EXPECT_NEAR(std::log2(4.925) - 2.0, 0.30, 0.005);
  EXPECT_NEAR(3.0 - std::log2(4.925), 0.70, 0.005);
}

TEST(QuantizeRatioTest, ExactCandidateMapsToItself) {
  const RatioCandidates r = RatioCandidates::Default();
  for (double c : r.factors()) EXPECT_EQ(QuantizeRatio(c, r), c);
}

TEST(QuantizeRatioTest, LogMidpointTiesTowardSmallerFactor) {
  const RatioCandidates r = RatioCandidates::Default();
  EXPECT_EQ(QuantizeRatio(std::exp2(1.5), r), 2.0);
  EXPECT_EQ(QuantizeRatio(std::exp2(3.5), r), 8.0);
  EXPECT_EQ(QuantizeRatio(std::sqrt(2.0) * 2.0, r), 2.0);
}

TEST(QuantizeRatioTest, SaturatesOutsideTheSet) {
  const RatioCandidates r = RatioCandidates::Default();
  EXPECT_EQ(QuantizeRatio(0.01, r), 2.0);
  EXPECT_EQ(QuantizeRatio(1.0, r), 2.0);
  EXPECT_EQ(QuantizeRatio(1e6, r), 32.0);
  EXPECT_THROW(QuantizeRatio(0.0, r), Error);
  EXPECT_THROW(QuantizeRatio(-1.0, r), Error);
}

TEST(QuantizeRatioTest, ClosureAndOracleEquivalenceOnRandomSets) {
  Gen gen(21);
  for (int set = 0; set < 50; ++set) {
    std::vector<double> cands;
    double c = 1.0;
    for (std::size_t k = gen.Size(1, 8); k > 0; --k) {
      c += gen.Real(0.1, 10.0);
      cands.push_back(c);
    }
    const RatioCandidates r(cands);
    for (int i = 0; i < 200; ++i) {
      const double r_hat = std::exp2(gen.Real(-5.0, 10.0));
      const double q = QuantizeRatio(r_hat, r);
      ASSERT_TRUE(r.Contains(q));
      ASSERT_EQ(q, RatioOracle(r_hat, cands)) << "r_hat=" << r_hat;
    }
  }
}

TEST(QuantizeLengthTest, ReferenceExamples) {
  const LengthCandidates m = LengthCandidates::Default();
  EXPECT_EQ(QuantizeLength(8.0, 512, m), 64u);
  EXPECT_EQ(QuantizeLength(512.0, 512, m), 16u);
  EXPECT_EQ(QuantizeLength(512.0 / 48.0, 512, m), 64u);  // m_hat = 48
  EXPECT_EQ(QuantizeLength(512.0 / 24.0, 512, m), 32u);  // m_hat = 24
  EXPECT_EQ(QuantizeLength(1.0, 512, m), 128u);
}

TEST(QuantizeLengthTest, ClosureAndOracleEquivalence) {
  Gen gen(22);
  const std::vector<std::size_t> cands = {16, 32, 64, 128};
  const LengthCandidates m(cands);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t l = gen.Size(1, 4096);
    const double r_hat = std::exp2(gen.Real(-3.0, 12.0));
    const std::size_t q = QuantizeLength(r_hat, l, m);
    ASSERT_TRUE(m.Contains(q));
    ASSERT_EQ(q, LengthOracle(r_hat, l, cands));
  }
  // Exact integer midpoints also agree.
  for (std::size_t l = 1; l <= 4096; l += 7) {
    for (double mid : {24.0, 48.0, 96.0}) {
      const double r_hat = static_cast<double>(l) / mid;
      ASSERT_EQ(QuantizeLength(r_hat, l, m), LengthOracle(r_hat, l, cands));
    }
  }
}

TEST(WindowSizeTest, EqualsTheFactor) {
  EXPECT_EQ(WindowSize(8.0), 8u);
  EXPECT_EQ(WindowSize(2.0), 2u);
  EXPECT_EQ(WindowSize(32.0), 32u);
  // The fractional convention maps through f = 1 / r.
  EXPECT_EQ(WindowSize(1.0 / 0.125), 8u);
}

TEST(RatioCandidatesTest, ValidatesAndConvertsFractions) {
  EXPECT_THROW(RatioCandidates({}), Error);
  EXPECT_THROW(RatioCandidates({4.0, 2.0}), Error);
  EXPECT_THROW(RatioCandidates({1.0, 2.0}), Error);
  EXPECT_THROW(RatioCandidates({2.0, 2.0}), Error);
  const std::vector<double> fractions = {0.125, 0.25, 0.5};
  EXPECT_EQ(RatioCandidates::FromFractions(fractions).factors(),
            (std::vector<double>{2.0, 4.0, 8.0}));
  EXPECT_THROW(LengthCandidates({}), Error);
  EXPECT_THROW(LengthCandidates({0, 4}), Error);
  EXPECT_THROW(LengthCandidates({8, 4}), Error);
}

TEST(SelectPlanTest, ComposesTheSteps) {
  const RatioCandidates r = RatioCandidates::Default();
  const LengthCandidates m = LengthCandidates::Default();
  const CompressionPlan p = SelectPlan(2.3, 0.0, PlanMode::kRatio, 1024, r, m);
  EXPECT_EQ(p.r_target, 4.0);
  EXPECT_EQ(p.window, 4u);
  EXPECT_EQ(p.LatentCount(), 256u);
  EXPECT_FALSE(p.m_target.has_value());
  EXPECT_NO_THROW(ValidatePlan(p, r, m));

  EXPECT_EQ(SelectPlan(2.3, 10.0, PlanMode::kRatio, 1024, r, m).r_target, 32.0);
  EXPECT_EQ(SelectPlan(2.3, -10.0, PlanMode::kRatio, 1024, r, m).r_target, 2.0);

  const CompressionPlan q = SelectPlan(3.0, 0.0, PlanMode::kLength, 512, r, m);
  EXPECT_EQ(q.m_target, 64u);
  EXPECT_EQ(q.LatentCount(), 64u);
  EXPECT_EQ(q.SelectedFactor(), 8.0);
  EXPECT_NO_THROW(ValidatePlan(q, r, m));
}

TEST(SelectPlanTest, InvariantsHoldOnRandomInputs) {
  Gen gen(23);
  const RatioCandidates r = RatioCandidates::Default();
  const LengthCandidates m = LengthCandidates::Default();
  for (int i = 0; i < 2000; ++i) {
    const PlanMode mode = gen.Bool() ? PlanMode::kRatio : PlanMode::kLength;
    const CompressionPlan p = SelectPlan(gen.Real(-3, 8), gen.Real(-10, 10),
                                         mode, gen.Size(1, 4096), r, m);
    ASSERT_EQ(p.y_scaled, p.y_hat + p.scale);
    ASSERT_EQ(p.r_hat, std::exp2(p.y_scaled));
    ASSERT_NO_THROW(ValidatePlan(p, r, m));
    if (mode == PlanMode::kRatio) {
      ASSERT_EQ(p.LatentCount(),
                (p.context_length + *p.window - 1) / *p.window);
    }
  }
}

TEST(SelectPlanTest, MonotoneInScale) {
  Gen gen(24);
  const RatioCandidates r = RatioCandidates::Default();
  const LengthCandidates m = LengthCandidates::Default();
  for (int i = 0; i < 100; ++i) {
    const double y = gen.Real(-2, 7);
    const std::size_t l = gen.Size(16, 4096);
    double prev_factor = 0.0;
    std::size_t prev_len = SIZE_MAX;
    for (int k = 0; k <= 100; ++k) {
      const double scale = -10.0 + 0.2 * k;
      const double f =
          *SelectPlan(y, scale, PlanMode::kRatio, l, r, m).r_target;
      const std::size_t len =
          *SelectPlan(y, scale, PlanMode::kLength, l, r, m).m_target;
      ASSERT_GE(f, prev_factor);
      ASSERT_LE(len, prev_len);
      prev_factor = f;
      prev_len = len;
    }
  }
}

TEST(ForceRatioTest, OverridesAndMarks) {
  const RatioCandidates r = RatioCandidates::Default();
  const LengthCandidates m = LengthCandidates::Default();
  const CompressionPlan p =
      ForceRatio(SelectPlan(1.0, 0.0, PlanMode::kRatio, 100, r, m), 16.0, r);
  EXPECT_EQ(p.r_target, 16.0);
  EXPECT_EQ(p.window, 16u);
  EXPECT_TRUE(p.randomized);
  EXPECT_THROW(ForceRatio(p, 3.0, r), Error);
  EXPECT_THROW(
      ForceRatio(SelectPlan(1.0, 0.0, PlanMode::kLength, 100, r, m), 4.0, r),
      Error);
}

TEST(ValidatePlanTest, CatchesBrokenPlans) {
  const RatioCandidates r = RatioCandidates::Default();
  const LengthCandidates m = LengthCandidates::Default();
  CompressionPlan p = SelectPlan(2.0, 0.0, PlanMode::kRatio, 64, r, m);
  p.window = 5;
  EXPECT_THROW(ValidatePlan(p, r, m), Error);
  p = SelectPlan(2.0, 0.0, PlanMode::kRatio, 64, r, m);
  p.r_target = 3.0;
  EXPECT_THROW(ValidatePlan(p, r, m), Error);
  p = SelectPlan(2.0, 0.0, PlanMode::kRatio, 64, r, m);
  p.y_scaled += 1.0;
  EXPECT_THROW(ValidatePlan(p, r, m), Error);
}

TEST(PlanModeTest, NamesRoundTrip) {
  EXPECT_EQ(ParsePlanMode(PlanModeName(PlanMode::kRatio)), PlanMode::kRatio);
  EXPECT_EQ(ParsePlanMode(PlanModeName(PlanMode::kLength)), PlanMode::kLength);
  EXPECT_THROW(ParsePlanMode("linear"), Error);
}

}  // namespace
}  // namespace sdcc
