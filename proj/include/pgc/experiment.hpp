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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgc/assignment.hpp"
#include "pgc/config.hpp"
#include "pgc/ordering.hpp"
#include "pgc/simulator.hpp"

namespace pgc {

/// Stream used to seed random orderings from the master seed.
inline constexpr std::uint64_t kOrderingStream = 3;

struct BuiltAssignment {
  AssignmentMatrix matrix;
  std::uint64_t graph_seed = 0;
  /// Second eigenvalue; only set for regular graphs.
  std::optional<double> lambda;
  bool ramanujan = true;
};

/// Builds the configured assignment. For regular graphs tries graph_seed,
/// graph_seed + 1, ... (graph_seed_search extra seeds) until the Ramanujan
/// condition holds, keeping the last graph tried if none does.
BuiltAssignment build_assignment(const ExperimentConfig& cfg);

struct NamedOrdering {
  std::string label;
  OrderingMatrix ordering;
};

/// approx-mse and exact-completion use the configured mode; ordering-compare
/// runs the optimal ordering and the best-of-k random one side by side.
std::vector<NamedOrdering> build_orderings(const ExperimentConfig& cfg, const AssignmentMatrix& a);

struct ExperimentResult {
  std::string summary_csv;
  std::string raw_csv;
  /// Human-readable lines, one per configuration cell plus diagnostics.
  std::vector<std::string> report;
};

inline constexpr const char* kSummaryHeader = "config_id,ell,T,metric,mean,std,n";
inline constexpr const char* kLagrangeHeader = "degree,precision,median_error,mean_error,n";

/// Runs the experiment in memory; `threads` overrides cfg.sim.threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Runs and writes cfg.output (and cfg.raw_output when set).
ExperimentResult run_and_write(const ExperimentConfig& cfg, std::size_t threads = 1);

}  // namespace pgc
