// Copyright 2026 The rsmb Authors. All Rights Reserved.
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
#include <string>

#include "kernels_internal.hpp"
#include "rsmb/error.hpp"

namespace rsmb::kernels {
namespace {

constexpr KernelTable kScalar{Isa::scalar, &detail::cgemm_scalar, &detail::interference_scalar,
                              &detail::sum_abs2_scalar};

#ifdef RSMB_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::avx2, &detail::cgemm_avx2, &detail::interference_avx2,
                            &detail::sum_abs2_avx2};
#endif

Isa best_supported() noexcept {
  return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("RSMB_KERNEL")) {
    if (auto isa = parse_isa(env); isa && cpu_supports(*isa)) return *isa;
  }
  return best_supported();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{&table_for(initial_isa())};
  return slot;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#ifdef RSMB_HAVE_AVX2_KERNELS
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(RSMB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error(ErrorCode::invalid_argument,
                "kernel variant '" + std::string(name(isa)) + "' not available on this CPU/build");
  }
  if (isa == Isa::avx2) return *avx2_table();
  return kScalar;
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return active().isa; }

void select(Isa isa) { active_slot().store(&table_for(isa), std::memory_order_release); }

void select_auto() noexcept {
  active_slot().store(&table_for(best_supported()), std::memory_order_release);
}

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view text) noexcept {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  if (text == "auto") return best_supported();
  return std::nullopt;
}

}  // namespace rsmb::kernels
