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

#ifndef SDCC_REPORT_H_
#define SDCC_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdcc/sweep.h"

namespace sdcc {

enum class ReportFormat { kCsv, kJson };

// Picks the format from the extension (.json, everything else CSV).
ReportFormat FormatForPath(const std::filesystem::path& path);

// Columns: scale, accuracy, avg_compression_ratio, ratio_log2_variance,
// n_correct. Reals use 17 significant digits so a read back is exact. An
// undefined ratio is an empty CSV cell or JSON null.
std::string FormatReport(std::span<const SweepPoint> points,
                         ReportFormat format);
void EmitReport(std::span<const SweepPoint> points, ReportFormat format,
                const std::filesystem::path& path);

// n_total is not stored, so it reads back as zero.
std::vector<SweepPoint> ParseReport(std::string_view text, ReportFormat format);
std::vector<SweepPoint> ReadReport(const std::filesystem::path& path,
                                   ReportFormat format);

}  // namespace sdcc

#endif  // SDCC_REPORT_H_
