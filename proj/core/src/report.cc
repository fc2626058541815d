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

#include "sdcc/report.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sdcc/error.h"

namespace sdcc {
namespace {

using nlohmann::json;

constexpr std::string_view kHeader =
    "scale,accuracy,avg_compression_ratio,ratio_log2_variance,n_correct";

std::string Real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseReal(const std::string& cell, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchema, "report line " + std::to_string(line) +
                                        ": bad number \"" + cell + "\"");
  }
}

std::vector<SweepPoint> ParseCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<SweepPoint> out;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_number == 1) {
      if (line != kHeader) {
        throw Error(ErrorCode::kSchema, "unexpected report header: " + line);
      }
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 5) {
      throw Error(ErrorCode::kSchema, "report line " +
                                          std::to_string(line_number) +
                                          ": expected 5 columns");
    }
    SweepPoint p;
    p.scale = ParseReal(cells[0], line_number);
    p.accuracy = ParseReal(cells[1], line_number);
    if (!cells[2].empty())
      p.avg_compression_ratio = ParseReal(cells[2], line_number);
    p.ratio_log2_variance = ParseReal(cells[3], line_number);
    p.n_correct = static_cast<std::size_t>(ParseReal(cells[4], line_number));
    out.push_back(p);
  }
  return out;
}

}  // namespace

ReportFormat FormatForPath(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ReportFormat::kJson : ReportFormat::kCsv;
}

std::string FormatReport(std::span<const SweepPoint> points,
                         ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kCsv) {
    out.append(kHeader).push_back('\n');
    for (const SweepPoint& p : points) {
      out += Real(p.scale) + ',' + Real(p.accuracy) + ',' +
             (p.avg_compression_ratio ? Real(*p.avg_compression_ratio) : "") +
             ',' + Real(p.ratio_log2_variance) + ',' +
             std::to_string(p.n_correct) + '\n';
    }
    return out;
  }
  // Hand-formatted so reals keep 17 digits regardless of the JSON library.
  out = "[\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& p = points[i];
    out += "  {\"scale\": " + Real(p.scale) +
           ", \"accuracy\": " + Real(p.accuracy) +
           ", \"avg_compression_ratio\": " +
           (p.avg_compression_ratio ? Real(*p.avg_compression_ratio) : "null") +
           ", \"ratio_log2_variance\": " + Real(p.ratio_log2_variance) +
           ", \"n_correct\": " + std::to_string(p.n_correct) + "}";
    out += i + 1 < points.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

void EmitReport(std::span<const SweepPoint> points, ReportFormat format,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << FormatReport(points, format);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<SweepPoint> ParseReport(std::string_view text,
                                    ReportFormat format) {
  if (format == ReportFormat::kCsv) return ParseCsv(text);
  std::vector<SweepPoint> out;
  try {
    for (const json& row : json::parse(text)) {
      SweepPoint p;
      p.scale = row.at("scale").get<double>();
      p.accuracy = row.at("accuracy").get<double>();
      const json& ratio = row.at("avg_compression_ratio");
      if (!ratio.is_null()) p.avg_compression_ratio = ratio.get<double>();
      p.ratio_log2_variance = row.at("ratio_log2_variance").get<double>();
      p.n_correct = row.at("n_correct").get<std::size_t>();
      out.push_back(p);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema,
                std::string("bad JSON report: ") + e.what());
  }
  return out;
}

std::vector<SweepPoint> ReadReport(const std::filesystem::path& path,
                                   ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseReport(buf.str(), format);
}

}  // namespace sdcc
