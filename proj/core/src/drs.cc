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

#include <algorithm>
#include <cmath>
#include <string>

#include "sdcc/error.h"

namespace sdcc {
namespace {

// Distances closer than this count as ties. Keeps exact midpoints such as
// 2^1.5 deterministic despite log2/exp2 rounding.
constexpr double kTieEpsilon = 1e-12;

void RequirePositiveFinite(double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be positive and finite");
  }
}

}  // namespace

RatioCandidates::RatioCandidates(std::vector<double> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ratio candidate set is empty");
  }
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!std::isfinite(factors_[i]) || !(factors_[i] > 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ratio candidates must be finite factors > 1");
    }
    if (i > 0 && !(factors_[i] > factors_[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ratio candidates must be strictly increasing");
    }
    log2_factors_.push_back(std::log2(factors_[i]));
  }
}

RatioCandidates RatioCandidates::Default() {
  return RatioCandidates({2.0, 4.0, 8.0, 16.0, 32.0});
}

RatioCandidates RatioCandidates::FromFractions(
    std::span<const double> fractions) {
  std::vector<double> factors;
  for (double f : fractions) {
    if (!(f > 0.0) || !(f < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fractional ratios must lie in (0, 1)");
    }
    factors.push_back(1.0 / f);
  }
  std::sort(factors.begin(), factors.end());
  return RatioCandidates(std::move(factors));
}

bool RatioCandidates::Contains(double factor) const {
  return std::find(factors_.begin(), factors_.end(), factor) != factors_.end();
}

LengthCandidates::LengthCandidates(std::vector<std::size_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "length candidate set is empty");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "length candidates must be positive");
    }
    if (i > 0 && counts_[i] <= counts_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "length candidates must be strictly increasing");
    }
  }
}

LengthCandidates LengthCandidates::Default() {
  return LengthCandidates({16, 32, 64, 128});
}

bool LengthCandidates::Contains(std::size_t count) const {
  return std::binary_search(counts_.begin(), counts_.end(), count);
}

std::string_view PlanModeName(PlanMode mode) {
  return mode == PlanMode::kRatio ? "ratio" : "length";
}

PlanMode ParsePlanMode(std::string_view name) {
  if (name == "ratio") return PlanMode::kRatio;
  if (name == "length") return PlanMode::kLength;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown plan mode \"" + std::string(name) + "\"");
}

std::size_t CompressionPlan::LatentCount() const {
  if (mode == PlanMode::kLength) {
    if (!m_target) throw Error(ErrorCode::kFailedPrecondition, "plan has no M");
    return *m_target;
  }
  if (!window || *window < 1) {
    throw Error(ErrorCode::kFailedPrecondition, "plan has no window size");
  }
  return (context_length + *window - 1) / *window;
}

double CompressionPlan::SelectedFactor() const {
  if (mode == PlanMode::kRatio) {
    if (!r_target) throw Error(ErrorCode::kFailedPrecondition, "plan has no r");
    return *r_target;
  }
  if (!m_target) throw Error(ErrorCode::kFailedPrecondition, "plan has no M");
  return static_cast<double>(context_length) / static_cast<double>(*m_target);
}

double ApplyScale(double y_hat, double scale) {
  if (!std::isfinite(y_hat) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction and scale must be finite");
  }
  return y_hat + scale;
}

double ToFactor(double y_scaled) {
  if (!std::isfinite(y_scaled)) {
    throw Error(ErrorCode::kInvalidArgument, "log factor must be finite");
  }
  if (std::abs(y_scaled) > 60.0) {
    throw Error(ErrorCode::kOutOfRange,
                "log factor " + std::to_string(y_scaled) + " exceeds |60|");
  }
  return std::exp2(y_scaled);
}

double QuantizeRatio(double r_hat, const RatioCandidates& candidates) {
  RequirePositiveFinite(r_hat, "r_hat");
  const std::vector<double>& logs = candidates.log2_factors_;
  const double x = std::log2(r_hat);
  const auto it = std::lower_bound(logs.begin(), logs.end(), x);
  if (it == logs.begin()) return candidates.factors_.front();
  if (it == logs.end()) return candidates.factors_.back();
  const std::size_t hi = static_cast<std::size_t>(it - logs.begin());
  const std::size_t lo = hi - 1;
  const double below = x - logs[lo];
  const double above = logs[hi] - x;
  return below <= above + kTieEpsilon ? candidates.factors_[lo]
                                      : candidates.factors_[hi];
}

std::size_t WindowSize(double r_target) {
  const long long s = std::llround(r_target);
  if (s < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window size would be < 1");
  }
  return static_cast<std::size_t>(s);
}

std::size_t QuantizeLength(double r_hat, std::size_t context_length,
                           const LengthCandidates& candidates) {
  RequirePositiveFinite(r_hat, "r_hat");
  if (context_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "context length must be >= 1");
  }
  const double m_hat = static_cast<double>(context_length) / r_hat;
  const std::vector<std::size_t>& counts = candidates.counts();
  const auto it = std::lower_bound(
      counts.begin(), counts.end(), m_hat,
      [](std::size_t c, double v) { return static_cast<double>(c) < v; });
  if (it == counts.begin()) return counts.front();
  if (it == counts.end()) return counts.back();
  const double lo = static_cast<double>(*(it - 1));
  const double hi = static_cast<double>(*it);
  const double tol = kTieEpsilon * std::max(1.0, m_hat);
  return (hi - m_hat) <= (m_hat - lo) + tol ? *it : *(it - 1);
}

CompressionPlan SelectPlan(double y_hat, double scale, PlanMode mode,
                           std::size_t context_length,
                           const RatioCandidates& ratios,
                           const LengthCandidates& lengths) {
  if (context_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "context length must be >= 1");
  }
  CompressionPlan plan;
  plan.mode = mode;
  plan.y_hat = y_hat;
  plan.scale = scale;
  plan.y_scaled = ApplyScale(y_hat, scale);
  plan.r_hat = ToFactor(plan.y_scaled);
  plan.context_length = context_length;
  if (mode == PlanMode::kRatio) {
    plan.r_target = QuantizeRatio(plan.r_hat, ratios);
    plan.window = WindowSize(*plan.r_target);
  } else {
    plan.m_target = QuantizeLength(plan.r_hat, context_length, lengths);
  }
  return plan;
}

CompressionPlan ForceRatio(CompressionPlan plan, double factor,
                           const RatioCandidates& ratios) {
  if (plan.mode != PlanMode::kRatio) {
    throw Error(ErrorCode::kFailedPrecondition,
                "ratio randomization applies to ratio mode only");
  }
  if (!ratios.Contains(factor)) {
    throw Error(ErrorCode::kInvalidArgument,
                "forced factor is not a candidate");
  }
  plan.r_target = factor;
  plan.window = WindowSize(factor);
  plan.randomized = true;
  return plan;
}

void ValidatePlan(const CompressionPlan& plan, const RatioCandidates& ratios,
                  const LengthCandidates& lengths) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kFailedPrecondition, "invalid plan: " + what);
  };
  if (plan.y_scaled != plan.y_hat + plan.scale)
    fail("y_scaled != y_hat + scale");
  if (plan.r_hat != std::exp2(plan.y_scaled)) fail("r_hat != 2^y_scaled");
  if (plan.mode == PlanMode::kRatio) {
    if (!plan.r_target || !ratios.Contains(*plan.r_target)) {
      fail("r_target not a candidate");
    }
    if (!plan.window || *plan.window < 1 ||
        *plan.window !=
            static_cast<std::size_t>(std::llround(*plan.r_target))) {
      fail("S != round(r_target)");
    }
  } else if (!plan.m_target || !lengths.Contains(*plan.m_target)) {
    fail("M_target not a candidate");
  }
}

}  // namespace sdcc
