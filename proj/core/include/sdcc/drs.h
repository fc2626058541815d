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

#ifndef SDCC_DRS_H_
#define SDCC_DRS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sdcc {

// Discrete ratio selection. Ratios are compression factors throughout
// (original length / compressed length, > 1). A fractional ratio f maps to
// the factor 1/f.

class RatioCandidates {
 public:
  // Strictly increasing factors, all > 1. Throws kInvalidArgument otherwise.
  explicit RatioCandidates(std::vector<double> factors);
  static RatioCandidates Default();  // {2, 4, 8, 16, 32}
  static RatioCandidates FromFractions(std::span<const double> fractions);

  const std::vector<double>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  double min() const { return factors_.front(); }
  double max() const { return factors_.back(); }
  bool Contains(double factor) const;

  friend bool operator==(const RatioCandidates&,
                         const RatioCandidates&) = default;

 private:
  std::vector<double> factors_;
  std::vector<double> log2_factors_;

  friend double QuantizeRatio(double, const RatioCandidates&);
};

class LengthCandidates {
 public:
  // Strictly increasing positive counts.
  explicit LengthCandidates(std::vector<std::size_t> counts);
  static LengthCandidates Default();  // {16, 32, 64, 128}

  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  std::size_t min() const { return counts_.front(); }
  std::size_t max() const { return counts_.back(); }
  bool Contains(std::size_t count) const;

  friend bool operator==(const LengthCandidates&,
                         const LengthCandidates&) = default;

 private:
  std::vector<std::size_t> counts_;
};

enum class PlanMode { kRatio, kLength };

std::string_view PlanModeName(PlanMode mode);
PlanMode ParsePlanMode(std::string_view name);

struct CompressionPlan {
  PlanMode mode = PlanMode::kRatio;
  double y_hat = 0.0;                   // predicted log2 factor
  double scale = 0.0;                   // user bias
  double y_scaled = 0.0;                // y_hat + scale
  double r_hat = 1.0;                   // 2^y_scaled
  std::optional<double> r_target;       // ratio mode
  std::optional<std::size_t> window;    // ratio mode, S
  std::optional<std::size_t> m_target;  // length mode
  std::size_t context_length = 0;       // content tokens, L_ctx
  bool randomized = false;  // r_target drawn by the ratio randomizer

  // ceil(L_ctx / S) in ratio mode, M_target in length mode.
  std::size_t LatentCount() const;
  // r_target in ratio mode; L_ctx / M_target in length mode.
  double SelectedFactor() const;

  friend bool operator==(const CompressionPlan&,
                         const CompressionPlan&) = default;
};

// y_hat + scale. Throws kInvalidArgument for non-finite input.
double ApplyScale(double y_hat, double scale);

// 2^y_scaled. Throws kOutOfRange when |y_scaled| > 60.
double ToFactor(double y_scaled);

// Nearest candidate in log2 distance; ties go to the smaller factor.
double QuantizeRatio(double r_hat, const RatioCandidates& candidates);

// round(factor). Throws kInvalidArgument if the result would be < 1.
std::size_t WindowSize(double r_target);

// m_hat = L_ctx / r_hat, nearest count in linear distance with no
// intermediate rounding; ties go to the larger count.
std::size_t QuantizeLength(double r_hat, std::size_t context_length,
                           const LengthCandidates& candidates);

CompressionPlan SelectPlan(double y_hat, double scale, PlanMode mode,
                           std::size_t context_length,
                           const RatioCandidates& ratios,
                           const LengthCandidates& lengths);

// Replaces the selected factor with `factor` (a member of `ratios`) while
// keeping the prediction provenance. Ratio mode only.
CompressionPlan ForceRatio(CompressionPlan plan, double factor,
                           const RatioCandidates& ratios);

// Throws kFailedPrecondition if any CompressionPlan invariant is violated.
void ValidatePlan(const CompressionPlan& plan, const RatioCandidates& ratios,
                  const LengthCandidates& lengths);

}  // namespace sdcc

#endif  // SDCC_DRS_H_
