// Copyright 2026 The PartialGC Authors. All Rights Reserved.
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

#pragma once

// Experiment configuration: a flat "key = value" file, '#' starts a comment.
// Lists are comma or whitespace separated. See README.md for every key.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgc/lagrange.hpp"
#include "pgc/simulator.hpp"

namespace pgc {

enum class ExperimentKind { kApproxMse, kExactCompletion, kOrderingCompare, kLagrange };
enum class AssignmentKind { kCyclic, kRegularGraph };
enum class OrderingMode { kOptimal, kRandomBestOfK };
enum class Normalization { kRaw, kPerTarget };

struct ExperimentConfig {
  std::string id = "experiment";
  ExperimentKind experiment = ExperimentKind::kApproxMse;

  AssignmentKind assignment = AssignmentKind::kRegularGraph;
  std::size_t m = 200;
  std::size_t degree = 8;
  std::uint64_t graph_seed = 1;
  /// Extra graph seeds to try until the second eigenvalue is below
  /// 2 sqrt(degree - 1); 0 accepts the first graph.
  std::size_t graph_seed_search = 0;

  OrderingMode ordering = OrderingMode::kOptimal;
  std::size_t random_k = 100;

  SimConfig sim;
  Normalization normalization = Normalization::kRaw;

  std::vector<std::size_t> degrees{20, 25, 30};
  /// nullopt is full precision.
  std::vector<std::optional<int>> precisions{std::nullopt};
  Interpolation interpolation = Interpolation::kLagrangeExpansion;

  std::string output = "results.csv";
  /// Per-trial CSV path; empty disables it.
  std::string raw_output;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(AssignmentKind kind);
std::string_view to_string(OrderingMode mode);
std::string_view to_string(Normalization mode);
std::string_view to_string(Interpolation method);

/// Throws ConfigError with the offending line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config_file(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& cfg);

/// Cross-field checks that need no file access (line 0 errors).
void validate_config(const ExperimentConfig& cfg);

}  // namespace pgc
