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

#include "pgc/simulator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "pgc/error.hpp"
#include "pgc/linalg.hpp"
#include "pgc/rng.hpp"

namespace pgc {

void SimConfig::validate(const AssignmentMatrix& a) const {
  if (trials == 0) throw InvalidParameter("trials must be >= 1");
  if (threads == 0) throw InvalidParameter("threads must be >= 1");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidParameter("rate must be a positive finite number");
  if (ells.empty()) throw InvalidParameter("at least one ell is required");
  for (const std::size_t ell : ells)
    if (ell == 0) throw InvalidParameter("ell must be >= 1");
  if (n_failures && *n_failures >= a.n_workers()) {
    throw InvalidParameter(fmt::format("failures ({}) must be below m = {}", *n_failures, a.n_workers()));
  }
  for (const double t : times)
    if (!(t >= 0.0)) throw InvalidParameter("trigger times must be >= 0");
}

std::vector<bool> draw_failures(std::size_t m, std::size_t alpha, std::uint64_t seed) {
  if (alpha > m) throw InvalidParameter(fmt::format("cannot fail {} of {} workers", alpha, m));
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  Rng rng(seed);
  std::vector<bool> failed(m, false);
  for (std::size_t k = 0; k < alpha; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(m - k));
    std::swap(idx[k], idx[pick]);
    failed[idx[k]] = true;
  }
  return failed;
}

Timeline simulate_worker_timeline(std::size_t load, double rate, bool failed, std::uint64_t seed) {
  if (!(rate > 0.0)) throw InvalidParameter("rate must be positive");
  Timeline times;
  if (failed) return times;
  Rng rng(seed);
  times.reserve(load);
  double clock = 0.0;
  for (std::size_t k = 0; k < load; ++k) {
    clock += rng.exponential(rate);
    times.push_back(clock);
  }
  return times;
}

std::vector<Timeline> simulate_cluster(const AssignmentMatrix& a, double rate, const std::vector<bool>& failed,
                                       std::uint64_t seed) {
  if (failed.size() != a.n_workers()) throw InvalidParameter("failure mask length differs from m");
  std::vector<Timeline> out(a.n_workers());
  for (std::size_t j = 0; j < a.n_workers(); ++j)
    out[j] = simulate_worker_timeline(a.load(j), rate, failed[j], mix_seed(seed, j));
  return out;
}

GlobalState state_at(const std::vector<Timeline>& timelines, double t) {
  GlobalState psi(timelines.size());
  for (std::size_t j = 0; j < timelines.size(); ++j) {
    const auto& tl = timelines[j];
    psi[j] = static_cast<std::uint32_t>(std::upper_bound(tl.begin(), tl.end(), t) - tl.begin());
  }
  return psi;
}

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// ell-th smallest entry, or kNever when there are fewer than ell.
double kth_time(std::vector<double>& times, std::size_t ell) {
  if (times.size() < ell) return kNever;
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(ell - 1), times.end());
  return times[ell - 1];
}

template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min(threads, n);
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename Trial>
std::vector<TrialMetrics> run_trials(const SimConfig& cfg, Trial&& trial) {
  std::vector<std::vector<TrialMetrics>> per_trial(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t k) { per_trial[k] = trial(k); });
  std::vector<TrialMetrics> out;
  for (auto& rows : per_trial) std::ranges::move(rows, std::back_inserter(out));
  return out;
}

std::uint64_t compression_seed(const SimConfig& cfg, std::uint64_t trial_seed, std::size_t ell) {
  return mix_seed(cfg.fixed_r ? cfg.seed : trial_seed, kCompressionStream + ell);
}

}  // namespace

std::optional<double> coverage_trigger_time(const std::vector<Timeline>& timelines, const AssignmentMatrix& a,
                                            const OrderingMatrix& o, std::size_t ell) {
  if (ell == 0) return 0.0;
  double trigger = 0.0;
  std::vector<double> times;
  for (std::size_t i = 0; i < a.n_chunks(); ++i) {
    times.clear();
    for (const std::uint32_t j : a.holders(i)) {
      const std::uint32_t r = o.rank(i, j);
      if (r != 0 && r <= timelines[j].size()) times.push_back(timelines[j][r - 1]);
    }
    trigger = std::max(trigger, kth_time(times, ell));
    if (trigger == kNever) return std::nullopt;
  }
  return trigger;
}

std::optional<double> baseline_completion_time(const std::vector<Timeline>& timelines, const AssignmentMatrix& a,
                                               std::size_t ell) {
  if (ell == 0) return 0.0;
  std::vector<double> finish(a.n_workers(), kNever);
  for (std::size_t j = 0; j < a.n_workers(); ++j) {
    if (a.load(j) > 0 && timelines[j].size() == a.load(j)) finish[j] = timelines[j].back();
  }
  double trigger = 0.0;
  std::vector<double> times;
  for (std::size_t i = 0; i < a.n_chunks(); ++i) {
    times.clear();
    for (const std::uint32_t j : a.holders(i))
      if (finish[j] != kNever) times.push_back(finish[j]);
    trigger = std::max(trigger, kth_time(times, ell));
    if (trigger == kNever) return std::nullopt;
  }
  return trigger;
}

double baseline_residual(const AssignmentMatrix& a, const std::vector<bool>& finished) {
  std::vector<std::uint32_t> cols;
  for (std::size_t j = 0; j < finished.size(); ++j)
    if (finished[j]) cols.push_back(static_cast<std::uint32_t>(j));
  const std::vector<double> ones(a.n_chunks(), 1.0);
  if (cols.empty()) return static_cast<double>(a.n_chunks());
  linalg::Matrix x(a.n_chunks(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const std::uint32_t i : a.support(cols[c])) x(i, c) = 1.0;
  return linalg::least_squares_residual(x, ones);
}

std::vector<TrialMetrics> run_approx_trial(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                           const SimConfig& cfg, std::size_t trial) {
  const std::size_t m = a.n_workers();
  const std::size_t n = a.n_chunks();
  const std::uint64_t seed = mix_seed(cfg.seed, trial);
  const auto failed = draw_failures(m, cfg.n_failures.value_or(0), mix_seed(seed, kFailureStream));
  const auto timelines = simulate_cluster(a, cfg.rate, failed, mix_seed(seed, kSpeedStream));

  std::vector<CompressionMatrix> rs;
  for (const std::size_t ell : cfg.ells) rs.push_back(CompressionMatrix::generate(ell, m, compression_seed(cfg, seed, ell)));

  // Blocks only change when their worker set does, so keep the last
  // residual per (ordering, ell, chunk).
  struct CachedBlock {
    std::vector<std::uint32_t> workers;
    double residual = -1.0;
  };
  std::vector<CachedBlock> cache(orderings.size() * rs.size() * n);

  std::vector<bool> last_finished;
  double last_baseline = 0.0;
  std::vector<TrialMetrics> out;
  for (const double t : cfg.times) {
    const GlobalState psi = state_at(timelines, t);
    std::vector<bool> finished(m);
    for (std::size_t j = 0; j < m; ++j) finished[j] = !failed[j] && psi[j] == a.load(j);
    if (last_finished.empty() || finished != last_finished) {
      last_baseline = baseline_residual(a, finished);
      last_finished = finished;
    }
    for (std::size_t oi = 0; oi < orderings.size(); ++oi) {
      const EncodingMatrix layout = build_indeterminate_mask(a, orderings[oi], psi, 1);
      CoverageVector delta(n);
      for (std::size_t i = 0; i < n; ++i) delta[i] = static_cast<std::uint32_t>(layout.free_rows(i).size());
      for (std::size_t li = 0; li < rs.size(); ++li) {
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          CachedBlock& slot = cache[(oi * rs.size() + li) * n + i];
          const auto workers = layout.free_rows(i);
          if (slot.residual < 0.0 || !std::ranges::equal(slot.workers, workers)) {
            slot.workers.assign(workers.begin(), workers.end());
            slot.residual = block_residual(rs[li], workers, solve_block(rs[li], workers));
          }
          residual += slot.residual;
        }
        TrialMetrics row;
        row.trial = trial;
        row.ordering = oi;
        row.ell = cfg.ells[li];
        row.time = t;
        row.psi = psi;
        row.residual = residual;
        row.theoretical = static_cast<double>(theoretical_error(delta, cfg.ells[li]));
        row.baseline_residual = last_baseline;
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

std::vector<TrialMetrics> run_exact_trial(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                          const SimConfig& cfg, std::size_t trial) {
  const std::size_t m = a.n_workers();
  const std::uint64_t seed = mix_seed(cfg.seed, trial);
  const auto full = simulate_cluster(a, cfg.rate, std::vector<bool>(m, false), mix_seed(seed, kSpeedStream));
  const std::uint64_t failure_seed = mix_seed(seed, kFailureStream);

  std::vector<TrialMetrics> out;
  for (const std::size_t ell : cfg.ells) {
    std::size_t alpha = 0;
    if (cfg.n_failures) {
      alpha = *cfg.n_failures;
    } else {
      const auto delta = a.regular_degree();
      if (!delta) throw InvalidParameter("failures = delta - ell needs a regular assignment");
      if (ell > *delta) throw InvalidParameter(fmt::format("ell = {} exceeds delta = {}", ell, *delta));
      alpha = *delta - ell;
    }
    bool done = false;
    for (std::size_t attempt = 0; attempt < kMaxResamples && !done; ++attempt) {
      const auto failed = draw_failures(m, alpha, mix_seed(failure_seed, ell * kMaxResamples + attempt));
      std::vector<Timeline> timelines = full;
      for (std::size_t j = 0; j < m; ++j)
        if (failed[j]) timelines[j].clear();
      const auto base = baseline_completion_time(timelines, a, ell);
      if (!base) continue;
      for (std::size_t oi = 0; oi < orderings.size(); ++oi) {
        const auto proposed = coverage_trigger_time(timelines, a, orderings[oi], ell);
        if (!proposed) throw InconsistentState("protocol coverage unreachable while the baseline completes");
        TrialMetrics row;
        row.trial = trial;
        row.ordering = oi;
        row.ell = ell;
        row.time = *proposed;
        row.psi = state_at(timelines, *proposed);
        row.baseline_time = *base;
        row.resamples = attempt;
        out.push_back(std::move(row));
      }
      done = true;
    }
    if (!done) {
      throw CoverageUnreachable(fmt::format("trial {}, ell = {}: coverage unreachable after {} failure draws",
                                            trial, ell, kMaxResamples));
    }
  }
  return out;
}

std::vector<TrialMetrics> run_approx(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                     const SimConfig& cfg) {
  cfg.validate(a);
  for (const auto& o : orderings) o.check_consistent(a);
  return run_trials(cfg, [&](std::size_t k) { return run_approx_trial(a, orderings, cfg, k); });
}

std::vector<TrialMetrics> run_exact(const AssignmentMatrix& a, const std::vector<OrderingMatrix>& orderings,
                                    const SimConfig& cfg) {
  cfg.validate(a);
  for (const auto& o : orderings) o.check_consistent(a);
  return run_trials(cfg, [&](std::size_t k) { return run_exact_trial(a, orderings, cfg, k); });
}

Summary aggregate(const std::vector<double>& values) {
  if (values.empty()) throw InvalidParameter("aggregate needs at least one value");
  Summary s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

}  // namespace pgc
