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

#include "pgc/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>

#include "pgc/error.hpp"
#include "text_util.hpp"

namespace pgc {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kApproxMse: return "approx-mse";
    case ExperimentKind::kExactCompletion: return "exact-completion";
    case ExperimentKind::kOrderingCompare: return "ordering-compare";
    case ExperimentKind::kLagrange: return "lagrange";
  }
  return "?";
}

std::string_view to_string(AssignmentKind kind) {
  return kind == AssignmentKind::kCyclic ? "cyclic" : "regular-graph";
}

std::string_view to_string(OrderingMode mode) {
  return mode == OrderingMode::kOptimal ? "optimal" : "random-best-of-k";
}

std::string_view to_string(Normalization mode) { return mode == Normalization::kRaw ? "raw" : "per-target"; }

std::string_view to_string(Interpolation method) {
  return method == Interpolation::kLagrangeExpansion ? "lagrange" : "vandermonde-lu";
}

namespace {

constexpr std::string_view kDeltaMinusEll = "delta-minus-ell";

using LineMap = std::map<std::string, std::size_t, std::less<>>;

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= value.size(); ++i) {
    if (i == value.size() || value[i] == ',' || value[i] == ' ' || value[i] == '\t') {
      if (i > start) out.push_back(value.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
T number(std::string_view value, std::size_t line, std::string_view key) {
  const auto v = detail::parse_number<T>(value);
  if (!v) throw ConfigError(line, fmt::format("{}: '{}' is not a valid number", key, value));
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(*v)) throw ConfigError(line, fmt::format("{}: '{}' is not finite", key, value));
  }
  return *v;
}

template <typename T>
std::vector<T> number_list(std::string_view value, std::size_t line, std::string_view key) {
  std::vector<T> out;
  for (const auto tok : split_list(value)) out.push_back(number<T>(tok, line, key));
  if (out.empty()) throw ConfigError(line, fmt::format("{}: empty list", key));
  return out;
}

bool boolean(std::string_view value, std::size_t line, std::string_view key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(line, fmt::format("{}: expected true or false, got '{}'", key, value));
}

template <typename E>
E choice(std::string_view value, std::size_t line, std::string_view key, std::initializer_list<E> options) {
  std::string known;
  for (const E e : options) {
    if (to_string(e) == value) return e;
    known += known.empty() ? "" : ", ";
    known += to_string(e);
  }
  throw ConfigError(line, fmt::format("{}: unknown value '{}' (expected one of {})", key, value, known));
}

void validate_impl(const ExperimentConfig& c, const LineMap& lines) {
  auto fail = [&](std::string_view key, const std::string& what) {
    const auto it = lines.find(key);
    return ConfigError(it == lines.end() ? 0 : it->second, fmt::format("{}: {}", key, what));
  };
  if (c.id.empty() || c.id.find_first_of(",\n\"") != std::string::npos) {
    throw fail("id", "must be non-empty and contain no commas or quotes");
  }
  if (c.output.empty()) throw fail("output", "must not be empty");
  if (c.sim.trials == 0) throw fail("trials", "must be >= 1");
  if (c.experiment == ExperimentKind::kLagrange) {
    for (const std::size_t d : c.degrees)
      if (d > 200) throw fail("degrees", "degree above 200 is not supported");
    for (const auto& p : c.precisions)
      if (p && (*p < 0 || *p > 300)) throw fail("precisions", "must be in [0, 300] or 'full'");
    return;
  }
  if (c.m == 0) throw fail("m", "must be >= 1");
  if (c.degree == 0 || c.degree > c.m) throw fail("degree", fmt::format("must be in [1, m = {}]", c.m));
  if (c.assignment == AssignmentKind::kRegularGraph) {
    if (c.degree >= c.m) throw fail("degree", "a regular graph needs degree < m");
    if ((c.m * c.degree) % 2 != 0) throw fail("degree", "m * degree must be even for a regular graph");
  }
  if (c.ordering == OrderingMode::kRandomBestOfK || c.experiment == ExperimentKind::kOrderingCompare) {
    if (c.random_k == 0) throw fail("random_k", "must be >= 1");
  }
  if (!(c.sim.rate > 0.0)) throw fail("rate", "must be > 0");
  if (c.sim.ells.empty()) throw fail("ell", "needs at least one value");
  for (const std::size_t ell : c.sim.ells) {
    if (ell == 0) throw fail("ell", "values must be >= 1");
    if (ell > c.degree) throw fail("ell", fmt::format("ell = {} exceeds the replication degree {}", ell, c.degree));
  }
  if (c.sim.n_failures && *c.sim.n_failures >= c.m) throw fail("failures", "must be below m");
  const bool approx = c.experiment == ExperimentKind::kApproxMse || c.experiment == ExperimentKind::kOrderingCompare;
  if (approx) {
    if (!c.sim.n_failures) throw fail("failures", "delta-minus-ell is only valid for exact-completion runs");
    if (c.sim.times.empty()) throw fail("times", "approximate runs need at least one trigger time");
    for (const double t : c.sim.times)
      if (t < 0.0) throw fail("times", "must be >= 0");
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) { validate_impl(cfg, {}); }

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  LineMap seen;
  const auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    auto raw = lines[ln];
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto body = detail::trim(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
    const auto key = detail::trim(body.substr(0, eq));
    const auto value = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (value.empty()) throw ConfigError(line, fmt::format("{}: missing value", key));
    if (!seen.emplace(std::string(key), line).second) {
      throw ConfigError(line, fmt::format("{}: already set on line {}", key, seen.find(key)->second));
    }

    if (key == "id") {
      c.id = std::string(value);
    } else if (key == "experiment") {
      c.experiment = choice(value, line, key,
                            {ExperimentKind::kApproxMse, ExperimentKind::kExactCompletion,
                             ExperimentKind::kOrderingCompare, ExperimentKind::kLagrange});
    } else if (key == "assignment") {
      c.assignment = choice(value, line, key, {AssignmentKind::kCyclic, AssignmentKind::kRegularGraph});
    } else if (key == "m") {
      c.m = number<std::size_t>(value, line, key);
    } else if (key == "degree") {
      c.degree = number<std::size_t>(value, line, key);
    } else if (key == "graph_seed") {
      c.graph_seed = number<std::uint64_t>(value, line, key);
    } else if (key == "graph_seed_search") {
      c.graph_seed_search = number<std::size_t>(value, line, key);
    } else if (key == "ordering") {
      c.ordering = choice(value, line, key, {OrderingMode::kOptimal, OrderingMode::kRandomBestOfK});
    } else if (key == "random_k") {
      c.random_k = number<std::size_t>(value, line, key);
    } else if (key == "ell") {
      c.sim.ells = number_list<std::size_t>(value, line, key);
    } else if (key == "failures") {
      if (value == kDeltaMinusEll) {
        c.sim.n_failures.reset();
      } else {
        c.sim.n_failures = number<std::size_t>(value, line, key);
      }
    } else if (key == "rate") {
      c.sim.rate = number<double>(value, line, key);
    } else if (key == "times") {
      c.sim.times = number_list<double>(value, line, key);
    } else if (key == "trials") {
      c.sim.trials = number<std::size_t>(value, line, key);
    } else if (key == "seed") {
      c.sim.seed = number<std::uint64_t>(value, line, key);
    } else if (key == "fixed_r") {
      c.sim.fixed_r = boolean(value, line, key);
    } else if (key == "normalization") {
      c.normalization = choice(value, line, key, {Normalization::kRaw, Normalization::kPerTarget});
    } else if (key == "degrees") {
      c.degrees = number_list<std::size_t>(value, line, key);
    } else if (key == "precisions") {
      c.precisions.clear();
      for (const auto tok : split_list(value)) {
        if (tok == "full") {
          c.precisions.emplace_back(std::nullopt);
        } else {
          c.precisions.emplace_back(number<int>(tok, line, key));
        }
      }
      if (c.precisions.empty()) throw ConfigError(line, "precisions: empty list");
    } else if (key == "interpolation") {
      c.interpolation =
          choice(value, line, key, {Interpolation::kLagrangeExpansion, Interpolation::kVandermondeLu});
    } else if (key == "output") {
      c.output = std::string(value);
    } else if (key == "raw_output") {
      c.raw_output = value == "none" ? std::string() : std::string(value);
    } else {
      throw ConfigError(line, fmt::format("unknown key '{}'", key));
    }
  }
  validate_impl(c, seen);
  return c;
}

ExperimentConfig read_config_file(const std::string& path) { return parse_config(detail::read_file(path)); }

std::string format_config(const ExperimentConfig& c) {
  auto join = [](const auto& values) {
    std::string out;
    for (const auto& v : values) out += fmt::format("{}{}", out.empty() ? "" : ", ", v);
    return out;
  };
  std::string precisions;
  for (const auto& p : c.precisions) precisions += fmt::format("{}{}", precisions.empty() ? "" : ", ", p ? std::to_string(*p) : "full");

  std::string out;
  out += fmt::format("id = {}\n", c.id);
  out += fmt::format("experiment = {}\n", to_string(c.experiment));
  out += fmt::format("assignment = {}\n", to_string(c.assignment));
  out += fmt::format("m = {}\n", c.m);
  out += fmt::format("degree = {}\n", c.degree);
  out += fmt::format("graph_seed = {}\n", c.graph_seed);
  out += fmt::format("graph_seed_search = {}\n", c.graph_seed_search);
  out += fmt::format("ordering = {}\n", to_string(c.ordering));
  out += fmt::format("random_k = {}\n", c.random_k);
  out += fmt::format("ell = {}\n", join(c.sim.ells));
  out += fmt::format("failures = {}\n", c.sim.n_failures ? std::to_string(*c.sim.n_failures) : std::string(kDeltaMinusEll));
  out += fmt::format("rate = {}\n", c.sim.rate);
  if (!c.sim.times.empty()) out += fmt::format("times = {}\n", join(c.sim.times));
  out += fmt::format("trials = {}\n", c.sim.trials);
  out += fmt::format("seed = {}\n", c.sim.seed);
  out += fmt::format("fixed_r = {}\n", c.sim.fixed_r);
  out += fmt::format("normalization = {}\n", to_string(c.normalization));
  out += fmt::format("degrees = {}\n", join(c.degrees));
  out += fmt::format("precisions = {}\n", precisions);
  out += fmt::format("interpolation = {}\n", to_string(c.interpolation));
  out += fmt::format("output = {}\n", c.output);
  out += fmt::format("raw_output = {}\n", c.raw_output.empty() ? "none" : c.raw_output);
  return out;
}

}  // namespace pgc
