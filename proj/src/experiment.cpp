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

#include "pgc/experiment.hpp"

#include <fmt/format.h>

#include "pgc/error.hpp"
#include "pgc/lagrange.hpp"
#include "pgc/rng.hpp"
#include "text_util.hpp"

namespace pgc {

BuiltAssignment build_assignment(const ExperimentConfig& cfg) {
  BuiltAssignment out;
  if (cfg.assignment == AssignmentKind::kCyclic) {
    out.matrix = build_cyclic(cfg.m, cfg.degree);
    return out;
  }
  const double bound = ramanujan_bound(cfg.degree);
  for (std::size_t k = 0; k <= cfg.graph_seed_search; ++k) {
    out.graph_seed = cfg.graph_seed + k;
    out.matrix = build_regular_graph({cfg.m, cfg.degree, out.graph_seed});
    out.lambda = second_eigenvalue(out.matrix);
    out.ramanujan = *out.lambda < bound;
    if (out.ramanujan) break;
  }
  return out;
}

std::vector<NamedOrdering> build_orderings(const ExperimentConfig& cfg, const AssignmentMatrix& a) {
  auto optimal = [&] { return chunk_ordering(a).ordering; };
  auto random = [&] { return best_random_ordering(a, mix_seed(cfg.sim.seed, kOrderingStream), cfg.random_k); };
  if (cfg.experiment == ExperimentKind::kOrderingCompare) return {{"", optimal()}, {"random", random()}};
  if (cfg.ordering == OrderingMode::kOptimal) return {{"", optimal()}};
  return {{"", random()}};
}

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string metric_name(const std::string& label, std::string_view metric) {
  return label.empty() ? std::string(metric) : fmt::format("{}_{}", label, metric);
}

void summary_row(std::string& csv, const ExperimentConfig& cfg, std::size_t ell, const std::string& t,
                 std::string_view metric, const Summary& s) {
  csv += fmt::format("{},{},{},{},{},{},{}\n", cfg.id, ell, t, metric, num(s.mean), num(s.std), s.n);
}

ExperimentResult run_approx_experiment(const ExperimentConfig& cfg, const AssignmentMatrix& a,
                                       const std::vector<NamedOrdering>& named, SimConfig sim) {
  std::vector<OrderingMatrix> orderings;
  for (const auto& n : named) orderings.push_back(n.ordering);
  const auto rows = run_approx(a, orderings, sim);

  const std::size_t nt = sim.times.size();
  const std::size_t no = orderings.size();
  const std::size_t nl = sim.ells.size();
  const std::size_t per_trial = nt * no * nl;
  const double n_chunks = static_cast<double>(a.n_chunks());
  const bool per_target = cfg.normalization == Normalization::kPerTarget;

  // values[(ti * no + oi) * nl + li][trial]
  std::vector<std::vector<double>> residual(per_trial), theoretical(per_trial);
  std::vector<std::vector<double>> baseline(nt);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const std::size_t cell = k % per_trial;
    const double scale = per_target ? 1.0 / (n_chunks * static_cast<double>(r.ell)) : 1.0;
    residual[cell].push_back(r.residual * scale);
    theoretical[cell].push_back(r.theoretical * scale);
    if (cell % (no * nl) == 0) baseline[cell / (no * nl)].push_back(r.baseline_residual * (per_target ? 1.0 / n_chunks : 1.0));
  }

  ExperimentResult out;
  out.summary_csv = std::string(kSummaryHeader) + "\n";
  for (std::size_t li = 0; li < nl; ++li) {
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const std::string t = fmt::format("{}", sim.times[ti]);
      std::string line = fmt::format("ell={} T={}", sim.ells[li], t);
      for (std::size_t oi = 0; oi < no; ++oi) {
        const std::size_t cell = (ti * no + oi) * nl + li;
        const Summary p = aggregate(residual[cell]);
        const Summary q = aggregate(theoretical[cell]);
        summary_row(out.summary_csv, cfg, sim.ells[li], t, metric_name(named[oi].label, "proposed_mse"), p);
        summary_row(out.summary_csv, cfg, sim.ells[li], t, metric_name(named[oi].label, "theoretical_mse"), q);
        line += fmt::format(" {}={:.6g} {}={:.6g}", metric_name(named[oi].label, "proposed"), p.mean,
                            metric_name(named[oi].label, "theoretical"), q.mean);
      }
      line += fmt::format(" baseline={:.6g}", aggregate(baseline[ti]).mean);
      out.report.push_back(std::move(line));
    }
  }
  for (std::size_t ti = 0; ti < nt; ++ti) {
    summary_row(out.summary_csv, cfg, 1, fmt::format("{}", sim.times[ti]), "baseline_mse", aggregate(baseline[ti]));
  }

  out.raw_csv = "trial,ordering,ell,T,residual,theoretical,baseline_residual\n";
  for (const auto& r : rows) {
    out.raw_csv += fmt::format("{},{},{},{},{},{},{}\n", r.trial, orderings.size() > 1 ? named[r.ordering].label : "",
                               r.ell, r.time, num(r.residual), num(r.theoretical), num(r.baseline_residual));
  }
  return out;
}

ExperimentResult run_exact_experiment(const ExperimentConfig& cfg, const AssignmentMatrix& a,
                                      const std::vector<NamedOrdering>& named, SimConfig sim) {
  std::vector<OrderingMatrix> orderings;
  for (const auto& n : named) orderings.push_back(n.ordering);
  const auto rows = run_exact(a, orderings, sim);

  const std::size_t no = orderings.size();
  const std::size_t nl = sim.ells.size();
  std::vector<std::vector<double>> proposed(no * nl);
  std::vector<std::vector<double>> baseline(nl);
  std::vector<std::size_t> resamples(nl, 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t cell = k % (no * nl);  // li * no + oi
    proposed[cell].push_back(rows[k].time);
    if (cell % no == 0) {
      baseline[cell / no].push_back(rows[k].baseline_time);
      resamples[cell / no] += rows[k].resamples;
    }
  }

  ExperimentResult out;
  out.summary_csv = std::string(kSummaryHeader) + "\n";
  for (std::size_t li = 0; li < nl; ++li) {
    const Summary b = aggregate(baseline[li]);
    std::string line = fmt::format("ell={}", sim.ells[li]);
    for (std::size_t oi = 0; oi < no; ++oi) {
      const Summary p = aggregate(proposed[li * no + oi]);
      summary_row(out.summary_csv, cfg, sim.ells[li], "", metric_name(named[oi].label, "proposed_completion"), p);
      line += fmt::format(" {}={:.6g}", metric_name(named[oi].label, "proposed"), p.mean);
    }
    summary_row(out.summary_csv, cfg, sim.ells[li], "", "baseline_completion", b);
    line += fmt::format(" baseline={:.6g} ratio={:.4g} resamples={}", b.mean,
                        b.mean / aggregate(proposed[li * no]).mean, resamples[li]);
    out.report.push_back(std::move(line));
  }

  out.raw_csv = "trial,ordering,ell,completion,baseline_completion,resamples\n";
  for (const auto& r : rows) {
    out.raw_csv += fmt::format("{},{},{},{},{},{}\n", r.trial, no > 1 ? named[r.ordering].label : "", r.ell,
                               num(r.time), num(r.baseline_time), r.resamples);
  }
  return out;
}

ExperimentResult run_lagrange_experiment(const ExperimentConfig& cfg) {
  const auto cells = lagrange_sweep(cfg.degrees, cfg.precisions, cfg.sim.trials, cfg.sim.seed, cfg.interpolation);
  ExperimentResult out;
  out.summary_csv = std::string(kLagrangeHeader) + "\n";
  for (const auto& c : cells) {
    const std::string p = c.precision ? std::to_string(*c.precision) : "full";
    out.summary_csv += fmt::format("{},{},{},{},{}\n", c.degree, p, num(c.median_error), num(c.mean_error), c.n);
    out.report.push_back(fmt::format("degree={} precision={} median={:.6g} mean={:.6g}", c.degree, p,
                                     c.median_error, c.mean_error));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  validate_config(cfg);
  if (cfg.experiment == ExperimentKind::kLagrange) return run_lagrange_experiment(cfg);

  const BuiltAssignment built = build_assignment(cfg);
  const auto named = build_orderings(cfg, built.matrix);
  SimConfig sim = cfg.sim;
  sim.threads = threads;

  ExperimentResult out = cfg.experiment == ExperimentKind::kExactCompletion
                             ? run_exact_experiment(cfg, built.matrix, named, sim)
                             : run_approx_experiment(cfg, built.matrix, named, sim);

  std::vector<std::string> head;
  if (built.lambda) {
    head.push_back(fmt::format("assignment: regular graph m={} degree={} graph_seed={} lambda={:.6f} bound={:.6f}",
                               cfg.m, cfg.degree, built.graph_seed, *built.lambda, ramanujan_bound(cfg.degree)));
    if (!built.ramanujan) head.push_back("warning: assignment graph does not meet the Ramanujan bound");
  } else {
    head.push_back(fmt::format("assignment: cyclic m={} degree={}", cfg.m, cfg.degree));
  }
  for (const auto& n : named) {
    head.push_back(fmt::format("ordering{}: qmax={} rowsum={}", n.label.empty() ? "" : " " + n.label,
                               q_max(built.matrix, n.ordering), n.ordering.max_row_sum()));
  }
  out.report.insert(out.report.begin(), head.begin(), head.end());
  return out;
}

ExperimentResult run_and_write(const ExperimentConfig& cfg, std::size_t threads) {
  ExperimentResult out = run_experiment(cfg, threads);
  detail::write_file(cfg.output, out.summary_csv);
  if (!cfg.raw_output.empty() && !out.raw_csv.empty()) detail::write_file(cfg.raw_output, out.raw_csv);
  return out;
}

}  // namespace pgc
