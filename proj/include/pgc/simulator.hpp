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

// Monte-Carlo cluster simulation.
//
// Every trial draws a failure set (alpha distinct workers), per-chunk
// processing times Exp(rate) for each surviving worker, and one compression
// matrix per ell. Seeds are derived from the master seed with mix_seed:
//
//   trial seed    = mix_seed(master, trial)
//   failures      = mix_seed(trial seed, kFailureStream)
//   speeds        = mix_seed(trial seed, kSpeedStream), worker j uses
//                   mix_seed(speeds, j)
//   R for ell     = mix_seed(trial seed, kCompressionStream + ell), or
//                   mix_seed(master, ...) when R is fixed across trials
//
// The partial-work protocol and the finished-workers-only baseline are
// always evaluated on the same draw.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgc/assignment.hpp"
#include "pgc/encoding.hpp"
#include "pgc/ordering.hpp"

namespace pgc {

inline constexpr std::uint64_t kFailureStream = 1;
inline constexpr std::uint64_t kSpeedStream = 2;
inline constexpr std::uint64_t kCompressionStream = 100;
/// Failure redraws allowed per exact-recovery trial.
inline constexpr std::size_t kMaxResamples = 100;

/// Completion time of each processed chunk, nondecreasing.
using Timeline = std::vector<double>;

struct SimConfig {
  std::vector<std::size_t> ells{1};
  /// Failed workers per trial; empty means delta - ell (exact runs only).
  std::optional<std::size_t> n_failures = 0;
  double rate = 1.0;
  /// Trigger times for the approximate runs.
  std::vector<double> times;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  bool fixed_r = false;
  std::size_t threads = 1;

  void validate(const AssignmentMatrix& a) const;

  bool operator==(const SimConfig&) const = default;
};

/// One row per (trial, ordering, ell, T) for approximate runs and per
/// (trial, ordering, ell) for exact runs.
struct TrialMetrics {
  std::size_t trial = 0;
  std::size_t ordering = 0;
  std::size_t ell = 0;
  /// T for approximate runs, the protocol's completion time for exact runs.
  double time = 0.0;
  GlobalState psi;
  double residual = 0.0;
  double theoretical = 0.0;
  double baseline_residual = 0.0;
  double baseline_time = 0.0;
  std::size_t resamples = 0;
};

std::vector<bool> draw_failures(std::size_t m, std::size_t alpha, std::uint64_t seed);

Timeline simulate_worker_timeline(std::size_t load, double rate, bool failed, std::uint64_t seed);
std::vector<Timeline> simulate_cluster(const AssignmentMatrix& a, double rate, const std::vector<bool>& failed,
                                       std::uint64_t seed);

/// psi_j = number of completion times <= t.
GlobalState state_at(const std::vector<Timeline>& timelines, double t);

/// Earliest t with Delta_i(t) >= ell for every chunk; nullopt when the
/// surviving workers cannot reach that coverage.
std::optional<double> coverage_trigger_time(const std::vector<Timeline>& timelines, const AssignmentMatrix& a,
                                            const OrderingMatrix& o, std::size_t ell);

/// Same target when only workers that finished their whole load count.
std::optional<double> baseline_completion_time(const std::vector<Timeline>& timelines, const AssignmentMatrix& a,
                                               std::size_t ell);

/// min_r ||A_F r - 1||^2 over the columns of the finished workers F.
double baseline_residual(const AssignmentMatrix& a, const std::vector<bool>& finished);

std::vector<TrialMetrics> run_approx_trial(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                           const SimConfig& cfg, std::size_t trial);

/// Throws CoverageUnreachable when kMaxResamples failure redraws never give
/// a reachable target.
std::vector<TrialMetrics> run_exact_trial(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                          const SimConfig& cfg, std::size_t trial);

/// Runs trials 0..cfg.trials-1 on cfg.threads threads and returns the rows
/// in trial order.
std::vector<TrialMetrics> run_approx(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                     const SimConfig& cfg);
std::vector<TrialMetrics> run_exact(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                    const SimConfig& cfg);

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

/// Sample mean and standard deviation (n - 1 denominator; 0 for n = 1).
Summary aggregate(const std::vector<double>& values);

}  // namespace pgc
