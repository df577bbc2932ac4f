/*
 * Copyright 2026 The xdual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Model files (JSON), instance files (CSV) and the statistics report.
// The formats are documented in docs/formats.md.

#ifndef XDUAL_IO_H_
#define XDUAL_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xdual/enumerate.h"
#include "xdual/model.h"
#include "xdual/oracle.h"

namespace xdual {

inline constexpr int kModelFormatVersion = 1;

// Parses and validates a model. Throws Error with kParse (with line and
// column), kSchema (with the offending field path) or kInvalidModel.
Model ParseModel(std::string_view text);

// Canonical JSON text; ParseModel(SerializeModel(m)) == m and re-serializing
// a parsed canonical file reproduces it byte for byte.
std::string SerializeModel(const Model& model);

std::string ReadFile(const std::string& path);
Model LoadModel(const std::string& path);

struct InstanceRow {
  // 1-based data row number (the header is row 0).
  std::size_t row = 0;
  Instance instance;
};

// CSV with a header row of feature names in any order and one category
// name per cell. Throws kParse naming the row and column of a bad cell.
std::vector<InstanceRow> ParseInstances(std::string_view text,
                                        const FeatureSpace& space);

// CSV text for `instances` with the header in feature order.
std::string SerializeInstances(const std::vector<Instance>& instances,
                               const FeatureSpace& space);

struct InstanceStats {
  std::size_t row = 0;
  std::string prediction;
  std::size_t num_axps = 0;
  std::size_t num_cxps = 0;
  std::size_t total_axp_size = 0;
  std::size_t total_cxp_size = 0;
  std::size_t max_axp_size = 0;
  std::size_t max_cxp_size = 0;
  std::uint64_t entailment_calls = 0;
  std::uint64_t witness_calls = 0;
  double seconds = 0;

  double avg_axp_size() const;
  double avg_cxp_size() const;
  std::uint64_t oracle_calls() const { return entailment_calls + witness_calls; }
};

InstanceStats SummarizeInstance(std::size_t row, std::string prediction,
                                const EnumerationResult& result,
                                const OracleStats& oracle_stats,
                                double seconds);

struct StatsReport {
  std::vector<InstanceStats> rows;

  // Sums over all rows; sizes averaged over all explanations.
  InstanceStats Total() const;
  // Per-instance CSV rows followed by an "all" row. Wall time only when
  // `with_time`, so that the default output is reproducible.
  std::string ToCsv(bool with_time) const;
  // Human-readable aggregate lines.
  std::string Summary() const;
  // Average CXp size <= average AXp size, over all explanations.
  bool CxpsNoLargerThanAxps() const;
};

}  // namespace xdual

#endif  // XDUAL_IO_H_
