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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace pgc::simd {
namespace {

bool cpu_has(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(PGC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(PGC_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Kernels* best_available() noexcept {
  if (const char* env = std::getenv("PGC_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return &detail::kScalarKernels;
  }
  if (const Kernels* k = kernels_for(Isa::kAvx2)) return k;
  if (const Kernels* k = kernels_for(Isa::kNeon)) return k;
  return &detail::kScalarKernels;
}

std::atomic<const Kernels*>& slot() noexcept {
  static std::atomic<const Kernels*> table{best_available()};
  return table;
}

}  // namespace

const Kernels& scalar_kernels() noexcept { return detail::kScalarKernels; }

const Kernels* kernels_for(Isa isa) noexcept {
  if (!cpu_has(isa)) return nullptr;
  switch (isa) {
    case Isa::kScalar:
      return &detail::kScalarKernels;
    case Isa::kAvx2:
#if defined(PGC_HAVE_AVX2)
      return &detail::kAvx2Kernels;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#if defined(PGC_HAVE_NEON)
      return &detail::kNeonKernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Kernels& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
  const Kernels* k = kernels_for(isa);
  if (k == nullptr) return false;
  slot().store(k, std::memory_order_release);
  return true;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

}  // namespace pgc::simd
