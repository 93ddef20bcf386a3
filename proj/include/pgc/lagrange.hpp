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

// Round-trip error of naive polynomial interpolation: sample a random
// polynomial at degree + 1 nodes, round the samples, recover monomial
// coefficients and compare on probe points.
//
// The default reconstruction expands each Lagrange basis polynomial
// prod_{k != i} (x - x_k) / (x_i - x_k) into monomials and sums them weighted
// by the samples, which is the explicit inverse of the Vandermonde matrix.
// kVandermondeLu solves the same system with partial-pivot LU instead.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pgc {

inline constexpr std::size_t kProbePoints = 64;

enum class Interpolation { kLagrangeExpansion, kVandermondeLu };

struct LagrangeTrial {
  std::size_t degree = 0;
  /// Decimal places kept in the sampled values; nullopt keeps full precision.
  std::optional<int> precision;
  std::uint64_t seed = 0;
  Interpolation method = Interpolation::kLagrangeExpansion;
};

/// Monomial coefficients (constant term first) of the polynomial through
/// (nodes[i], values[i]). Throws InvalidParameter on repeated nodes.
std::vector<double> interpolate(std::span<const double> nodes, std::span<const double> values,
                                Interpolation method);

/// Rounds to `places` decimal places; nullopt returns x unchanged.
double round_to_places(double x, std::optional<int> places);

/// Draws coefficients (degree + 1 standard normals, constant term first) and
/// then the nodes (uniform on [0, 1]) from Rng(trial.seed).
double lagrange_roundtrip_error(const LagrangeTrial& trial);

/// Explicit form: max |p_hat - p| / max |p| over kProbePoints points spread
/// evenly on [0, 1]. Throws InvalidParameter on repeated nodes or when
/// nodes.size() != coeffs.size().
double lagrange_roundtrip_error(std::span<const double> coeffs, std::span<const double> nodes,
                                std::optional<int> precision,
                                Interpolation method = Interpolation::kLagrangeExpansion);

struct LagrangeSummary {
  std::size_t degree = 0;
  std::optional<int> precision;
  double median_error = 0.0;
  double mean_error = 0.0;
  std::size_t n = 0;
};

/// Trial t of every cell uses seed mix_seed(seed, t), so cells that differ
/// only in precision share their polynomials and nodes.
std::vector<LagrangeSummary> lagrange_sweep(std::span<const std::size_t> degrees,
                                            std::span<const std::optional<int>> precisions, std::size_t trials,
                                            std::uint64_t seed,
                                            Interpolation method = Interpolation::kLagrangeExpansion);

double median(std::vector<double> values);

}  // namespace pgc
