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

#include "pgc/lagrange.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgc/error.hpp"
#include "pgc/rng.hpp"

namespace pgc {

namespace {

double horner(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

void check_distinct(std::span<const double> nodes) {
  std::vector<double> sorted(nodes.begin(), nodes.end());
  std::ranges::sort(sorted);
  if (std::ranges::adjacent_find(sorted) != sorted.end()) throw InvalidParameter("interpolation nodes must be distinct");
}

std::vector<double> expand_lagrange(std::span<const double> nodes, std::span<const double> values) {
  const std::size_t n = nodes.size();
  std::vector<double> coeffs(n, 0.0);
  std::vector<double> basis;
  for (std::size_t i = 0; i < n; ++i) {
    basis.assign(1, 1.0);
    double denom = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      basis.push_back(0.0);
      for (std::size_t e = basis.size() - 1; e > 0; --e) basis[e] = basis[e - 1] - nodes[k] * basis[e];
      basis[0] *= -nodes[k];
      denom *= nodes[i] - nodes[k];
    }
    const double w = values[i] / denom;
    for (std::size_t e = 0; e < n; ++e) coeffs[e] += w * basis[e];
  }
  return coeffs;
}

std::vector<double> solve_vandermonde(std::span<const double> nodes, std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd vander(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    double power = 1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      vander(r, c) = power;
      power *= nodes[static_cast<std::size_t>(r)];
    }
    rhs(r) = values[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd fitted = vander.partialPivLu().solve(rhs);
  return {fitted.data(), fitted.data() + fitted.size()};
}

}  // namespace

std::vector<double> interpolate(std::span<const double> nodes, std::span<const double> values,
                                Interpolation method) {
  if (nodes.size() != values.size() || nodes.empty()) throw InvalidParameter("need one value per node");
  check_distinct(nodes);
  return method == Interpolation::kLagrangeExpansion ? expand_lagrange(nodes, values)
                                                     : solve_vandermonde(nodes, values);
}

double round_to_places(double x, std::optional<int> places) {
  if (!places) return x;
  const double scale = std::pow(10.0, *places);
  return std::round(x * scale) / scale;
}

double lagrange_roundtrip_error(std::span<const double> coeffs, std::span<const double> nodes,
                                std::optional<int> precision, Interpolation method) {
  if (coeffs.size() != nodes.size() || coeffs.empty()) {
    throw InvalidParameter("need degree + 1 nodes for degree + 1 coefficients");
  }
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = round_to_places(horner(coeffs, nodes[i]), precision);
  const std::vector<double> fitted = interpolate(nodes, values, method);

  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < kProbePoints; ++k) {
    const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(kProbePoints);
    const double truth = horner(coeffs, x);
    worst = std::max(worst, std::abs(horner(fitted, x) - truth));
    scale = std::max(scale, std::abs(truth));
  }
  return scale == 0.0 ? worst : worst / scale;
}

double lagrange_roundtrip_error(const LagrangeTrial& trial) {
  Rng rng(trial.seed);
  std::vector<double> coeffs(trial.degree + 1);
  for (double& c : coeffs) c = rng.normal();
  std::vector<double> nodes(trial.degree + 1);
  for (double& x : nodes) x = rng.uniform01();
  return lagrange_roundtrip_error(coeffs, nodes, trial.precision, trial.method);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidParameter("median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::ranges::nth_element(values, values.begin() + static_cast<std::ptrdiff_t>(mid));
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<LagrangeSummary> lagrange_sweep(std::span<const std::size_t> degrees,
                                            std::span<const std::optional<int>> precisions, std::size_t trials,
                                            std::uint64_t seed, Interpolation method) {
  if (trials == 0) throw InvalidParameter("trials must be >= 1");
  std::vector<LagrangeSummary> out;
  for (const std::size_t degree : degrees) {
    for (const auto& precision : precisions) {
      std::vector<double> errors;
      errors.reserve(trials);
      for (std::size_t t = 0; t < trials; ++t) errors.push_back(lagrange_roundtrip_error({degree, precision, mix_seed(seed, t), method}));
      LagrangeSummary s;
      s.degree = degree;
      s.precision = precision;
      s.n = trials;
      s.mean_error = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(trials);
      s.median_error = median(std::move(errors));
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace pgc
