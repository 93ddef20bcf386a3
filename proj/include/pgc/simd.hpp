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

// Double-precision vector kernels behind a runtime-selected dispatch table.
//
// Every kernel has a scalar reference implementation. Vectorised variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled in separate translation
// units and chosen once at startup from the CPU feature flags. The variants
// are not bit-identical to the scalar path (different summation order, fused
// multiply-add), so anything that needs bitwise reproducibility must run all
// of its work through one table. The process-wide table satisfies that.
//
// Set PGC_SIMD=scalar in the environment to force the reference kernels.

#include <cstddef>
#include <string_view>

namespace pgc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct Gram2 {
  double xx;
  double yy;
  double xy;
};

struct Kernels {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  // Fused {x.x, y.y, x.y} in one pass.
  Gram2 (*gram2)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
};

const Kernels& scalar_kernels() noexcept;

/// Returns the vectorised table for `isa`, or nullptr when it was not built
/// for this target or the running CPU lacks the instructions.
const Kernels* kernels_for(Isa isa) noexcept;

/// The table used by the library. Selected on first use.
const Kernels& active() noexcept;

/// Overrides the active table. Not thread-safe with respect to concurrent
/// kernel use; intended for tests and benchmarks. Returns false when `isa`
/// is unavailable (the active table is left unchanged).
bool select(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

}  // namespace pgc::simd
