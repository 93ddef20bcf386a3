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

// Acceptance checks. Prints one PASS/FAIL line per criterion, plus indented
// detail lines. Usage:
//
//   acceptance [--cli path/to/partialgc] [--workdir dir] [--threads n]
//              [--known-failures 9,...] [--log report.txt]
//
// Exits non-zero when a criterion fails that is not listed as known.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pgc/assignment.hpp"
#include "pgc/encoding.hpp"
#include "pgc/error.hpp"
#include "pgc/experiment.hpp"
#include "pgc/lagrange.hpp"
#include "pgc/ordering.hpp"
#include "pgc/rng.hpp"
#include "pgc/simulator.hpp"
#include "test_support.hpp"

namespace {

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

struct Options {
  std::string cli;
  std::filesystem::path workdir = std::filesystem::temp_directory_path() / "pgc_acceptance";
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::set<int> known_failures;
  std::string log;
};

// ---------------------------------------------------------------- 1

Verdict ordering_optimality() {
  pgc::ExperimentConfig cfg;
  cfg.m = 200;
  cfg.degree = 8;
  cfg.graph_seed = 1;
  cfg.graph_seed_search = 20;
  const auto built = pgc::build_assignment(cfg);
  const auto opt = pgc::chunk_ordering(built.matrix);
  std::size_t bad_rows = 0;
  for (std::size_t i = 0; i < 200; ++i) bad_rows += opt.ordering.row_sum(i) != 36;
  const std::size_t qmax = pgc::q_max(built.matrix, opt.ordering);
  Verdict v;
  v.pass = bad_rows == 0 && qmax == (200 - 8 - 1) * 8 + 36;
  v.summary = fmt::format("rows != 36: {}, q_max = {} (expected {})", bad_rows, qmax, (200 - 8 - 1) * 8 + 36);
  v.details.push_back(fmt::format("graph seed {}, lambda = {:.6f} < {:.6f}", built.graph_seed, *built.lambda,
                                  pgc::ramanujan_bound(8)));
  return v;
}

// ---------------------------------------------------------------- 2

// Worker-by-worker search over all within-worker permutations, pruned on the
// running largest row sum of the rank matrix.
std::size_t exhaustive_min_row_sum(const pgc::AssignmentMatrix& a) {
  const std::size_t m = a.n_workers();
  std::vector<std::vector<std::vector<std::uint32_t>>> perms(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::uint32_t> s(a.support(j).begin(), a.support(j).end());
    std::sort(s.begin(), s.end());
    do perms[j].push_back(s);
    while (std::next_permutation(s.begin(), s.end()));
  }
  std::vector<std::size_t> rows(a.n_chunks(), 0);
  std::size_t best = SIZE_MAX;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t cur) {
    if (cur >= best) return;
    if (j == m) {
      best = cur;
      return;
    }
    for (const auto& p : perms[j]) {
      std::size_t next = cur;
      for (std::size_t r = 0; r < p.size(); ++r) next = std::max(next, rows[p[r]] += r + 1);
      rec(j + 1, next);
      for (std::size_t r = 0; r < p.size(); ++r) rows[p[r]] -= r + 1;
    }
  };
  rec(0, 0);
  return best;
}

// Largest total progress over all psi in which nobody has reached `chunk`.
std::size_t adversarial_q(const pgc::OrderingMatrix& o, std::size_t chunk) {
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t total) {
    if (j == o.n_workers()) {
      best = std::max(best, total);
      return;
    }
    const auto seq = o.sequence(j);
    for (std::size_t p = 0; p <= seq.size(); ++p) {
      if (p > 0 && seq[p - 1] == chunk) break;
      rec(j + 1, total + p);
    }
  };
  rec(0, 0);
  return best;
}

Verdict ordering_brute_force() {
  pgc::Rng rng(2);
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  std::map<std::pair<std::size_t, std::size_t>, int> shapes;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t m = 2 + rng.below(7);
    const std::size_t delta = 1 + rng.below(std::min<std::size_t>(3, m));
    const auto a = pgc::testing::random_square_regular(m, delta, rng.next_u64());
    ++shapes[{m, delta}];
    const auto opt = pgc::chunk_ordering(a);
    const std::size_t qmax = pgc::q_max(a, opt.ordering);
    // Enumerated adversarial q_max of the returned ordering, and the search
    // minimum converted to q_max.
    std::size_t brute_qmax = 0;
    for (std::size_t i = 0; i < m; ++i) brute_qmax = std::max(brute_qmax, adversarial_q(opt.ordering, i));
    const std::size_t best_rows = exhaustive_min_row_sum(a);
    const std::size_t exhaustive_q = best_rows - delta + (m - delta) * delta;
    if (qmax != brute_qmax || qmax != exhaustive_q) ++mismatches;
    ++checked;
  }
  Verdict v;
  v.pass = mismatches == 0 && checked == 50;
  v.summary = fmt::format("{} instances, {} mismatches", checked, mismatches);
  std::string mix;
  for (const auto& [shape, n] : shapes) mix += fmt::format(" ({},{})x{}", shape.first, shape.second, n);
  v.details.push_back("(m, delta) drawn:" + mix);
  return v;
}

// ---------------------------------------------------------------- 3

Verdict exact_recovery() {
  double worst_residual = 0;
  double worst_rel = 0;
  std::size_t runs = 0;
  for (const std::size_t m : {50, 200}) {
    const std::size_t delta = 8;
    const auto a = pgc::build_regular_graph({m, delta, 1});
    const auto o = pgc::chunk_ordering(a).ordering;
    for (std::size_t ell = 1; ell <= 4; ++ell) {
      for (std::uint64_t t = 0; t < 100; ++t) {
        const std::uint64_t s = pgc::mix_seed(m * 1000 + ell, t);
        const auto failed = pgc::draw_failures(m, delta - ell, pgc::mix_seed(s, pgc::kFailureStream));
        const auto tl = pgc::simulate_cluster(a, 1.0, failed, pgc::mix_seed(s, pgc::kSpeedStream));
        const auto trigger = pgc::coverage_trigger_time(tl, a, o, ell);
        if (!trigger) throw pgc::Error("coverage unreachable with delta - ell failures");
        const auto psi = pgc::state_at(tl, *trigger);
        const auto r = pgc::CompressionMatrix::generate(ell, m, pgc::mix_seed(s, pgc::kCompressionStream + ell));
        const auto b = pgc::solve_all(r, pgc::build_indeterminate_mask(a, o, psi, ell));
        worst_residual = std::max(worst_residual, pgc::residual_error(r, b));

        const std::size_t dim = 33;
        const auto grads = pgc::GradientSet::random(m, dim, pgc::mix_seed(s, 7));
        std::vector<std::vector<double>> sent(m);
        for (std::size_t j = 0; j < m; ++j)
          if (!failed[j]) sent[j] = pgc::encode_gradient(b.row(j), grads, ell);
        const auto decoded = pgc::assemble(pgc::decode(r, sent), dim);
        const auto truth = grads.total();
        double num = 0, den = 0;
        for (std::size_t k = 0; k < dim; ++k) {
          num += (decoded[k] - truth[k]) * (decoded[k] - truth[k]);
          den += truth[k] * truth[k];
        }
        worst_rel = std::max(worst_rel, std::sqrt(num / den));
        ++runs;
      }
    }
  }
  Verdict v;
  v.pass = worst_residual <= 1e-8 && worst_rel <= 1e-6;
  v.summary = fmt::format("{} runs, max residual {:.3e} (<= 1e-8), max relative decode error {:.3e} (<= 1e-6)", runs,
                          worst_residual, worst_rel);
  return v;
}

// ---------------------------------------------------------------- 4

Verdict worker_agreement() {
  pgc::Rng rng(4);
  std::size_t pairs = 0;
  std::size_t differing = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t m = 6 + rng.below(35);
    const std::size_t delta = 2 + rng.below(5);
    const std::size_t ell = 1 + rng.below(delta);
    const auto a = pgc::testing::random_square_regular(m, delta, rng.next_u64());
    const auto o = pgc::random_ordering(a, rng.next_u64());
    pgc::GlobalState psi(m);
    for (std::size_t j = 0; j < m; ++j) psi[j] = static_cast<std::uint32_t>(rng.below(delta + 1));
    const auto r = pgc::CompressionMatrix::generate(ell, m, rng.next_u64());
    const auto mask = pgc::build_indeterminate_mask(a, o, psi, ell);

    // Every worker solves on its own thread from the broadcast alone.
    std::vector<std::future<pgc::WorkerCoefficients>> jobs;
    for (std::size_t j = 0; j < m; ++j)
      jobs.push_back(std::async(std::launch::async, [&, j] { return pgc::solve_worker_coefficients(j, r, mask); }));
    std::map<std::uint32_t, std::vector<const pgc::linalg::Matrix*>> by_chunk;
    std::vector<pgc::WorkerCoefficients> views;
    for (auto& f : jobs) views.push_back(f.get());
    for (const auto& w : views)
      for (const auto& blk : w.blocks) by_chunk[blk.chunk].push_back(&blk.values);
    for (const auto& [chunk, copies] : by_chunk) {
      for (std::size_t p = 0; p < copies.size(); ++p) {
        for (std::size_t q = p + 1; q < copies.size(); ++q) {
          const auto& x = *copies[p];
          const auto& y = *copies[q];
          ++pairs;
          if (x.rows() != y.rows() || x.cols() != y.cols() ||
              std::memcmp(x.data(), y.data(), sizeof(double) * x.rows() * x.cols()) != 0)
            ++differing;
        }
      }
    }
  }
  Verdict v;
  v.pass = differing == 0 && pairs > 0;
  v.summary = fmt::format("100 instances, {} worker pairs sharing a block, {} not bitwise identical", pairs, differing);
  return v;
}

// ---------------------------------------------------------------- 5

Verdict error_formula() {
  pgc::Rng rng(5);
  const std::size_t draws = 10000;
  double worst = 0;
  Verdict v;
  for (int inst = 0; inst < 12; ++inst) {
    for (;;) {
      const std::size_t m = 4 + rng.below(17);
      const std::size_t delta = 1 + rng.below(std::min<std::size_t>(4, m));
      const std::size_t ell = 1 + rng.below(4);
      const auto a = pgc::testing::random_square_regular(m, delta, rng.next_u64());
      const auto o = pgc::random_ordering(a, rng.next_u64());
      pgc::GlobalState psi(m);
      for (std::size_t j = 0; j < m; ++j) psi[j] = static_cast<std::uint32_t>(rng.below(delta + 1));
      const std::size_t theory = pgc::theoretical_error(pgc::coverage(a, o, psi), ell);
      if (theory == 0) continue;
      const auto mask = pgc::build_indeterminate_mask(a, o, psi, ell);
      const std::uint64_t base = rng.next_u64();
      double sum = 0;
      for (std::size_t d = 0; d < draws; ++d) {
        const auto r = pgc::CompressionMatrix::generate(ell, m, pgc::mix_seed(base, d));
        sum += pgc::residual_error(r, pgc::solve_all(r, mask));
      }
      const double mean = sum / static_cast<double>(draws);
      const double rel = std::abs(mean - static_cast<double>(theory)) / static_cast<double>(theory);
      worst = std::max(worst, rel);
      v.details.push_back(fmt::format("m={} delta={} ell={}: empirical {:.6f}, formula {}", m, delta, ell, mean, theory));
      break;
    }
  }
  v.pass = worst <= 0.05;
  v.summary = fmt::format("12 instances x {} draws, worst relative gap {:.2e} (<= 5%)", draws, worst);
  return v;
}

// ---------------------------------------------------------------- 6 and 8

const std::vector<double> kSweep = {1, 2, 3, 4, 6, 8, 12, 16, 24};
const std::vector<std::size_t> kEllSweep = {1, 2, 3};

struct CompareMeans {
  // [ordering][ell index][T index]
  std::vector<std::vector<std::vector<double>>> proposed, theoretical;
  std::vector<double> baseline;
  std::size_t n_chunks = 0;
};

CompareMeans run_compare(std::size_t threads) {
  pgc::ExperimentConfig cfg;
  cfg.experiment = pgc::ExperimentKind::kOrderingCompare;
  cfg.m = 200;
  cfg.degree = 8;
  cfg.graph_seed = 1;
  cfg.graph_seed_search = 20;
  cfg.random_k = 100;
  cfg.sim.ells = kEllSweep;
  cfg.sim.n_failures = 7;
  cfg.sim.times = kSweep;
  cfg.sim.trials = 1000;
  cfg.sim.seed = 7;
  cfg.sim.threads = threads;
  const auto built = pgc::build_assignment(cfg);
  const auto named = pgc::build_orderings(cfg, built.matrix);
  std::vector<pgc::OrderingMatrix> orders;
  for (const auto& n : named) orders.push_back(n.ordering);
  const auto rows = pgc::run_approx(built.matrix, orders, cfg.sim);

  CompareMeans out;
  out.n_chunks = built.matrix.n_chunks();
  const auto shape = std::vector<std::vector<double>>(kEllSweep.size(), std::vector<double>(kSweep.size(), 0.0));
  out.proposed.assign(orders.size(), shape);
  out.theoretical.assign(orders.size(), shape);
  out.baseline.assign(kSweep.size(), 0.0);
  std::vector<std::size_t> baseline_n(kSweep.size(), 0);
  for (const auto& r : rows) {
    const auto ti = static_cast<std::size_t>(std::find(kSweep.begin(), kSweep.end(), r.time) - kSweep.begin());
    const auto li = static_cast<std::size_t>(std::find(kEllSweep.begin(), kEllSweep.end(), r.ell) - kEllSweep.begin());
    out.proposed[r.ordering][li][ti] += r.residual / 1000.0;
    out.theoretical[r.ordering][li][ti] += r.theoretical / 1000.0;
    if (r.ordering == 0 && li == 0) {
      out.baseline[ti] += r.baseline_residual / 1000.0;
      ++baseline_n[ti];
    }
  }
  for (std::size_t n : baseline_n)
    if (n != 1000) throw pgc::Error("unexpected trial count in the comparison run");
  return out;
}

Verdict mse_experiment(const CompareMeans& c) {
  const double n = static_cast<double>(c.n_chunks);
  Verdict v;
  bool a_ok = true, b_ok = true, c_ok = true;
  std::size_t c_cells = 0;
  double c_worst = 0;
  std::size_t raw_inversions = 0;
  for (std::size_t li = 0; li < kEllSweep.size(); ++li) {
    const double ell = static_cast<double>(kEllSweep[li]);
    for (std::size_t ti = 0; ti < kSweep.size(); ++ti) {
      const double p = c.proposed[0][li][ti];
      const double q = c.theoretical[0][li][ti];
      const double b = c.baseline[ti];
      const double p_mse = p / (n * ell);
      const double b_mse = b / n;
      if (!(p_mse <= b_mse)) a_ok = false;
      if (p > b) ++raw_inversions;
      if (q >= 1.0) {
        ++c_cells;
        const double rel = std::abs(p - q) / q;
        c_worst = std::max(c_worst, rel);
        if (rel > 0.10) c_ok = false;
      }
      v.details.push_back(fmt::format("ell={} T={:>2}: proposed {:.4e} baseline {:.4e} (per target); raw {:.4e} vs {:.4e}, "
                                      "estimate {:.4e}",
                                      kEllSweep[li], kSweep[ti], p_mse, b_mse, p, b, q));
    }
    const double p_last = c.proposed[0][li].back() / (n * ell);
    const double b_last = c.baseline.back() / n;
    if (!(p_last * 100.0 <= b_last)) b_ok = false;
  }
  v.pass = a_ok && b_ok && c_ok;
  v.summary = fmt::format("(a) proposed <= baseline at every T: {}; (b) >= 100x lower at T={}: {}; (c) within 10% of "
                          "the estimate in {} cells, worst {:.2e}: {}",
                          a_ok ? "yes" : "no", kSweep.back(), b_ok ? "yes" : "no", c_cells, c_worst,
                          c_ok ? "yes" : "no");
  v.details.push_back(fmt::format("raw-unit cells where proposed > baseline (information only): {}", raw_inversions));
  return v;
}

Verdict ordering_vs_random(const CompareMeans& c) {
  Verdict v;
  bool ok = true;
  std::string per_ell;
  for (std::size_t li = 0; li < kEllSweep.size(); ++li) {
    std::size_t inversions = 0;
    for (std::size_t ti = 0; ti < kSweep.size(); ++ti) {
      const double opt = c.proposed[0][li][ti];
      const double rnd = c.proposed[1][li][ti];
      if (opt > rnd + 1e-9) ++inversions;
      v.details.push_back(fmt::format("ell={} T={:>2}: optimal {:.4e} random {:.4e}", kEllSweep[li], kSweep[ti], opt, rnd));
    }
    if (inversions > 1) ok = false;
    per_ell += fmt::format("{}ell={}: {}", per_ell.empty() ? "" : ", ", kEllSweep[li], inversions);
  }
  v.pass = ok;
  v.summary = fmt::format("inversions per sweep (<= 1 allowed): {}", per_ell);
  return v;
}

// ---------------------------------------------------------------- 7

Verdict completion_speedup(std::size_t threads) {
  const auto a = pgc::build_cyclic(200, 8);
  const std::vector<pgc::OrderingMatrix> orders = {pgc::chunk_ordering(a).ordering};
  pgc::SimConfig cfg;
  cfg.ells = {1, 2, 3};
  cfg.n_failures = std::nullopt;
  cfg.trials = 1000;
  cfg.seed = 7;
  cfg.threads = threads;
  const auto rows = pgc::run_exact(a, orders, cfg);
  Verdict v;
  v.pass = true;
  std::string ratios;
  for (std::size_t ell : cfg.ells) {
    double p = 0, b = 0;
    std::size_t n = 0, resamples = 0;
    for (const auto& r : rows) {
      if (r.ell != ell) continue;
      p += r.time;
      b += r.baseline_time;
      resamples += r.resamples;
      ++n;
    }
    const double ratio = b / p;
    if (!(ratio >= 1.5 && ratio <= 3.0)) v.pass = false;
    ratios += fmt::format("{}ell={}: {:.3f}", ratios.empty() ? "" : ", ", ell, ratio);
    v.details.push_back(fmt::format("ell={}: proposed mean {:.4f}, baseline mean {:.4f}, {} trials, {} failure redraws",
                                    ell, p / static_cast<double>(n), b / static_cast<double>(n), n, resamples));
  }
  v.summary = fmt::format("baseline/proposed in [1.5, 3.0]: {}", ratios);
  return v;
}

// ---------------------------------------------------------------- 9

Verdict lagrange_instability() {
  const std::vector<std::size_t> degrees = {20, 25, 30};
  const std::vector<std::optional<int>> full = {std::nullopt};
  const std::uint64_t seed = 3;
  const auto cells = pgc::lagrange_sweep(degrees, full, 100, seed);
  bool increasing = true;
  for (std::size_t k = 1; k < cells.size(); ++k) increasing = increasing && cells[k].median_error > cells[k - 1].median_error;

  Verdict v;
  std::string medians;
  for (const auto& c : cells) medians += fmt::format("{}{}: {:.3e}", medians.empty() ? "" : ", ", c.degree, c.median_error);

  // Precisions 1..16 decimal places, then full; per seed the error must not
  // grow as precision rises.
  std::vector<std::optional<int>> precisions;
  for (int p = 1; p <= 16; ++p) precisions.emplace_back(p);
  precisions.emplace_back(std::nullopt);
  std::size_t total_violations = 0;
  for (const std::size_t d : degrees) {
    std::size_t violations = 0, seeds_hit = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      double prev = INFINITY;
      bool hit = false;
      for (const auto& p : precisions) {
        const double e = pgc::lagrange_roundtrip_error({d, p, pgc::mix_seed(seed, t), pgc::Interpolation::kLagrangeExpansion});
        if (e > prev) {
          ++violations;
          hit = true;
        }
        prev = e;
      }
      seeds_hit += hit;
    }
    total_violations += violations;
    v.details.push_back(fmt::format("degree {}: {} precision steps where the error grew, {} of 100 seeds affected", d,
                                    violations, seeds_hit));
  }
  v.pass = increasing && total_violations == 0;
  v.summary = fmt::format("median strictly increasing ({}): {}; non-increasing in precision per seed: {}", medians,
                          increasing ? "yes" : "no", total_violations == 0 ? "yes" : "no");
  return v;
}

// ---------------------------------------------------------------- 10

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism(const Options& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.workdir);
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"approx", "experiment = approx-mse\nm = 60\ndegree = 4\nell = 1, 2\nfailures = 3\ntimes = 1, 4\ntrials = 40\n"
                 "seed = 11\n"},
      {"compare", "experiment = ordering-compare\nm = 60\ndegree = 4\nell = 1, 2\nfailures = 3\ntimes = 1, 4\n"
                  "trials = 40\nseed = 11\nrandom_k = 10\nnormalization = per-target\n"},
      {"exact", "experiment = exact-completion\nassignment = cyclic\nm = 60\ndegree = 4\nell = 1, 2, 3\n"
                "failures = delta-minus-ell\ntrials = 100\nseed = 11\n"},
      {"lagrange", "experiment = lagrange\ndegrees = 10, 15\nprecisions = 4, full\ntrials = 30\nseed = 11\n"},
  };
  Verdict v;
  v.pass = true;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = opt.workdir / (name + ".cfg");
    std::ofstream(cfg) << "id = " << name << "\n" << text;
    std::string outputs[3];
    std::string raws[3];
    for (int run = 0; run < 3; ++run) {
      const fs::path out = opt.workdir / fmt::format("{}_{}.csv", name, run);
      const fs::path raw = opt.workdir / fmt::format("{}_{}.raw.csv", name, run);
      if (!opt.cli.empty()) {
        // Third run uses more threads; trial order must not depend on it.
        const std::string cmd = fmt::format("\"{}\" --quiet --raw --threads {} run \"{}\" -o \"{}\"", opt.cli,
                                            run == 2 ? 3 : 1, cfg.string(), out.string());
        if (std::system(cmd.c_str()) != 0) {
          v.pass = false;
          v.details.push_back(fmt::format("{}: command failed: {}", name, cmd));
          continue;
        }
      } else {
        auto c = pgc::read_config_file(cfg.string());
        c.output = out.string();
        c.raw_output = raw.string();
        pgc::run_and_write(c, run == 2 ? 3 : 1);
      }
      outputs[run] = slurp(out);
      raws[run] = fs::exists(raw) ? slurp(raw) : std::string();
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2] && raws[0] == raws[1] &&
                      raws[0] == raws[2];
    v.pass = v.pass && same;
    v.details.push_back(fmt::format("{}: {} bytes summary, {} bytes per-trial, identical across 3 runs: {}", name,
                                    outputs[0].size(), raws[0].size(), same ? "yes" : "no"));
  }
  v.summary = opt.cli.empty() ? "in-process reruns" : "CLI reruns (1, 1 and 3 threads)";
  return v;
}

// ----------------------------------------------------------------

Options parse_args(int argc, char** argv) {
  Options o;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    const std::string value = argv[i + 1];
    if (key == "--cli") {
      o.cli = value;
    } else if (key == "--workdir") {
      o.workdir = value;
    } else if (key == "--threads") {
      o.threads = std::stoul(value);
    } else if (key == "--log") {
      o.log = value;
    } else if (key == "--known-failures") {
      std::stringstream s(value);
      for (std::string tok; std::getline(s, tok, ',');)
        if (!tok.empty()) o.known_failures.insert(std::stoi(tok));
    } else {
      throw std::invalid_argument("unknown option " + key);
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const Options opt = parse_args(argc, argv);
  int unexpected = 0;
  std::FILE* log = opt.log.empty() ? nullptr : std::fopen(opt.log.c_str(), "w");
  auto emit = [&](const std::string& line) {
    fmt::print("{}", line);
    if (log != nullptr) fmt::print(log, "{}", line);
  };
  auto report = [&](int id, double budget_s, const std::function<Verdict()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.summary = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = opt.known_failures.count(id) > 0;
    emit(fmt::format("criterion {:>2}: {} {} [{:.1f} s, budget {:.0f} s]{}\n", id, v.pass ? "PASS" : "FAIL", v.summary,
                     secs, budget_s, !v.pass && known ? " (known failure)" : ""));
    for (const auto& d : v.details) emit(fmt::format("    {}\n", d));
    std::fflush(stdout);
    if (!v.pass && !known) ++unexpected;
  };

  report(1, 5, ordering_optimality);
  report(2, 60, ordering_brute_force);
  report(3, 120, exact_recovery);
  report(4, 60, worker_agreement);
  report(5, 120, error_formula);

  std::optional<CompareMeans> compare;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    compare = run_compare(opt.threads);
  } catch (const std::exception& e) {
    emit(fmt::format("    comparison run failed: {}\n", e.what()));
  }
  const double compare_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(fmt::format("    shared 1000-trial comparison run: {:.1f} s\n", compare_s));
  report(6, 600, [&] { return compare ? mse_experiment(*compare) : Verdict{false, "comparison run failed", {}}; });
  report(7, 300, [&] { return completion_speedup(opt.threads); });
  report(8, 600, [&] { return compare ? ordering_vs_random(*compare) : Verdict{false, "comparison run failed", {}}; });
  report(9, 60, lagrange_instability);
  report(10, 600, [&] { return determinism(opt); });
  if (log != nullptr) std::fclose(log);
  return unexpected == 0 ? 0 : 1;
}
