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

// partialgc: command-line front end for the experiments.
//
//   partialgc assign --kind regular-graph --m 200 --degree 8 --graph-seed 1 -o g.txt
//   partialgc order g.txt
//   partialgc simulate-approx approx.cfg --threads 4
//   partialgc simulate-exact exact.cfg
//   partialgc lagrange-demo lagrange.cfg
//   partialgc run any.cfg

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include "pgc/assignment.hpp"
#include "pgc/config.hpp"
#include "pgc/error.hpp"
#include "pgc/experiment.hpp"
#include "pgc/ordering.hpp"
#include "pgc/simd.hpp"

namespace {

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool raw = false;
  bool quiet = false;
};

std::string raw_path_for(const std::string& output) {
  const auto dot = output.rfind('.');
  const auto slash = output.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return output + ".raw.csv";
  return output.substr(0, dot) + ".raw.csv";
}

int run_config(const std::string& path, const GlobalFlags& flags, std::optional<pgc::ExperimentKind> expect,
               const std::string& output_override) {
  pgc::ExperimentConfig cfg = pgc::read_config_file(path);
  if (expect) {
    const bool approx_ok = *expect == pgc::ExperimentKind::kApproxMse &&
                           cfg.experiment == pgc::ExperimentKind::kOrderingCompare;
    if (cfg.experiment != *expect && !approx_ok) {
      fmt::print(stderr, "error: {}: experiment '{}' does not match this subcommand\n", path,
                 pgc::to_string(cfg.experiment));
      return 2;
    }
  }
  if (flags.seed) cfg.sim.seed = *flags.seed;
  if (!output_override.empty()) cfg.output = output_override;
  if (flags.raw && cfg.raw_output.empty()) cfg.raw_output = raw_path_for(cfg.output);

  const pgc::ExperimentResult result = pgc::run_and_write(cfg, flags.threads);
  if (!flags.quiet) {
    for (const auto& line : result.report) fmt::print("[{}] {}\n", cfg.id, line);
    fmt::print("[{}] wrote {}\n", cfg.id, cfg.output);
  }
  return 0;
}

int run_order(const std::string& input, std::string output) {
  const pgc::AssignmentMatrix a = pgc::read_assignment_file(input);
  const auto degree = a.regular_degree();
  if (!degree) throw pgc::UnsupportedAssignment("order: the assignment is not square with equal row and column sums");
  const pgc::OptimalOrdering opt = pgc::chunk_ordering(a);
  const std::size_t qmax = pgc::q_max(a, opt.ordering);
  const bool optimal = qmax == pgc::q_max_lower_bound(a.n_workers(), *degree);
  if (output.empty()) output = input + ".ord";
  std::ofstream(output) << pgc::format_ordering(opt.ordering);
  fmt::print("qmax={} rowsum={} optimal={}\n", qmax, opt.ordering.max_row_sum(), optimal);
  return 0;
}

int run_assign(const std::string& kind, std::size_t m, std::size_t degree, std::uint64_t seed,
               const std::string& output) {
  pgc::AssignmentMatrix a;
  if (kind == "cyclic") {
    a = pgc::build_cyclic(m, degree);
  } else if (kind == "regular-graph") {
    a = pgc::build_regular_graph({m, degree, seed});
    const double lambda = pgc::second_eigenvalue(a);
    const double bound = pgc::ramanujan_bound(degree);
    fmt::print(stderr, "lambda={:.6f} bound={:.6f}\n", lambda, bound);
    if (lambda >= bound) fmt::print(stderr, "warning: graph does not meet the Ramanujan bound\n");
  } else {
    throw pgc::InvalidParameter(fmt::format("unknown assignment kind '{}'", kind));
  }
  pgc::write_assignment_file(output, a);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient coding with partial stragglers: ordering, encoding and cluster experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the master seed of the config");
  app.add_option("--threads", flags.threads, "Worker threads for independent trials")->check(CLI::PositiveNumber);
  app.add_flag("--raw", flags.raw, "Also write per-trial rows next to the summary CSV");
  app.add_flag("-q,--quiet", flags.quiet, "Only print errors");
  std::string simd;
  app.add_option("--simd", simd, "Force a kernel set (scalar, avx2, neon)");

  std::string config_path;
  std::string output;
  auto add_config_cmd = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", output, "Summary CSV path (overrides the config)");
    return cmd;
  };
  auto* approx_cmd = add_config_cmd("simulate-approx", "Approximate recovery: MSE against trigger time");
  auto* exact_cmd = add_config_cmd("simulate-exact", "Exact recovery: completion time against ell");
  auto* lagrange_cmd = add_config_cmd("lagrange-demo", "Round-trip error of naive polynomial interpolation");
  auto* run_cmd = add_config_cmd("run", "Run whichever experiment the config names");

  std::string assignment_path;
  auto* order_cmd = app.add_subcommand("order", "Optimal chunk ordering for a square regular assignment");
  order_cmd->add_option("assignment", assignment_path, "Assignment file")->required()->check(CLI::ExistingFile);
  order_cmd->add_option("-o,--output", output, "Ordering file (default <assignment>.ord)");

  std::string kind = "regular-graph";
  std::size_t m = 0;
  std::size_t degree = 0;
  std::uint64_t graph_seed = 1;
  auto* assign_cmd = app.add_subcommand("assign", "Write a cyclic or random regular graph assignment");
  assign_cmd->add_option("--kind", kind, "cyclic or regular-graph")->check(CLI::IsMember({"cyclic", "regular-graph"}));
  assign_cmd->add_option("--m", m, "Workers (= chunks)")->required();
  assign_cmd->add_option("--degree", degree, "Chunks per worker")->required();
  assign_cmd->add_option("--graph-seed", graph_seed, "Graph seed");
  assign_cmd->add_option("-o,--output", output, "Assignment file")->required();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) flags.seed = seed_value;

  try {
    if (!simd.empty()) {
      const pgc::simd::Isa isa = simd == "scalar" ? pgc::simd::Isa::kScalar
                                 : simd == "avx2" ? pgc::simd::Isa::kAvx2
                                                  : pgc::simd::Isa::kNeon;
      if ((simd != "scalar" && simd != "avx2" && simd != "neon") || !pgc::simd::select(isa)) {
        fmt::print(stderr, "error: kernel set '{}' is not available\n", simd);
        return 2;
      }
    }
    if (*approx_cmd) return run_config(config_path, flags, pgc::ExperimentKind::kApproxMse, output);
    if (*exact_cmd) return run_config(config_path, flags, pgc::ExperimentKind::kExactCompletion, output);
    if (*lagrange_cmd) return run_config(config_path, flags, pgc::ExperimentKind::kLagrange, output);
    if (*run_cmd) return run_config(config_path, flags, std::nullopt, output);
    if (*order_cmd) return run_order(assignment_path, output);
    if (*assign_cmd) return run_assign(kind, m, degree, graph_seed, output);
  } catch (const pgc::ConfigError& e) {
    fmt::print(stderr, "config error: {}: {}\n", config_path, e.what());
    return 2;
  } catch (const pgc::CoverageUnreachable& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  } catch (const pgc::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
