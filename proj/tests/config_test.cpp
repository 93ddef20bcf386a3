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

#include <gtest/gtest.h>

#include <string>

#include "pgc/config.hpp"
#include "pgc/error.hpp"

namespace {

constexpr const char* kApprox = R"(# approximate recovery
id = g200
experiment = ordering-compare
assignment = regular-graph
m = 200
degree = 8
graph_seed = 1
ell = 1, 2 3
failures = 7
times = 1, 2.5, 24
trials = 1000
seed = 2024   # master seed
normalization = per-target
output = out/approx.csv
raw_output = none
)";

std::size_t error_line(const std::string& text) {
  try {
    pgc::parse_config(text);
  } catch (const pgc::ConfigError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return 0;
}

TEST(Config, ParsesEveryField) {
  const auto c = pgc::parse_config(kApprox);
  EXPECT_EQ(c.id, "g200");
  EXPECT_EQ(c.experiment, pgc::ExperimentKind::kOrderingCompare);
  EXPECT_EQ(c.assignment, pgc::AssignmentKind::kRegularGraph);
  EXPECT_EQ(c.m, 200u);
  EXPECT_EQ(c.sim.ells, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(c.sim.n_failures, 7u);
  EXPECT_EQ(c.sim.times, (std::vector<double>{1, 2.5, 24}));
  EXPECT_EQ(c.sim.trials, 1000u);
  EXPECT_EQ(c.sim.seed, 2024u);
  EXPECT_EQ(c.normalization, pgc::Normalization::kPerTarget);
  EXPECT_EQ(c.output, "out/approx.csv");
  EXPECT_TRUE(c.raw_output.empty());
}

TEST(Config, CanonicalFormRoundTrips) {
  const auto c = pgc::parse_config(kApprox);
  EXPECT_EQ(pgc::parse_config(pgc::format_config(c)), c);

  const auto exact = pgc::parse_config(
      "experiment = exact-completion\nassignment = cyclic\nell = 1,2,3\nfailures = delta-minus-ell\n"
      "rate = 0.3333333333333333\nfixed_r = true\n");
  EXPECT_FALSE(exact.sim.n_failures.has_value());
  EXPECT_TRUE(exact.sim.fixed_r);
  EXPECT_EQ(pgc::parse_config(pgc::format_config(exact)), exact);

  const auto lag = pgc::parse_config("experiment = lagrange\ndegrees = 20 25\nprecisions = 3, full\n"
                                     "interpolation = vandermonde-lu\n");
  EXPECT_EQ(lag.precisions, (std::vector<std::optional<int>>{3, std::nullopt}));
  EXPECT_EQ(lag.interpolation, pgc::Interpolation::kVandermondeLu);
  EXPECT_EQ(pgc::parse_config(pgc::format_config(lag)), lag);
}

TEST(Config, ErrorsCarryLineNumbers) {
  const std::string head = "experiment = approx-mse\ntimes = 1\n";
  EXPECT_EQ(error_line(head + "bogus = 1\n"), 3u);
  EXPECT_EQ(error_line(head + "m = ten\n"), 3u);
  EXPECT_EQ(error_line(head + "\n# c\nm = -1\n"), 5u);
  EXPECT_EQ(error_line(head + "m = 10\nm = 12\n"), 4u);
  EXPECT_EQ(error_line(head + "just words\n"), 3u);
  EXPECT_EQ(error_line(head + "rate = nan\n"), 3u);
  EXPECT_EQ(error_line(head + "ordering = best\n"), 3u);
  EXPECT_EQ(error_line(head + "fixed_r = maybe\n"), 3u);
  EXPECT_EQ(error_line(head + "m = \n"), 3u);
}

TEST(Config, CrossFieldChecksPointAtTheKey) {
  EXPECT_EQ(error_line("experiment = approx-mse\ntimes = 1\ndegree = 4\nell = 1, 5\n"), 4u);
  EXPECT_EQ(error_line("experiment = approx-mse\nfailures = delta-minus-ell\ntimes = 1\n"), 2u);
  EXPECT_EQ(error_line("m = 7\ndegree = 3\nexperiment = approx-mse\ntimes = 1\n"), 2u);
  EXPECT_EQ(error_line("experiment = exact-completion\nm = 10\nfailures = 10\n"), 3u);
  EXPECT_THROW(pgc::parse_config("experiment = approx-mse\n"), pgc::ConfigError);
  EXPECT_NO_THROW(pgc::parse_config("experiment = exact-completion\n"));
}

TEST(Config, ValidateWithoutLines) {
  pgc::ExperimentConfig c;
  c.sim.times = {1};
  EXPECT_NO_THROW(pgc::validate_config(c));
  c.degree = 0;
  try {
    pgc::validate_config(c);
    FAIL();
  } catch (const pgc::ConfigError& e) {
    EXPECT_EQ(e.line(), 0u);
  }
}

}  // namespace
