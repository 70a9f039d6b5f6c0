// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#include "fedcav/base/log.h"
#include "fedcav/simd/kernels.h"

namespace fedcav::simd {

#if defined(FEDCAV_HAVE_AVX2_KERNELS)
const KernelTable* Avx2KernelTableIfCompiled();
#endif

const KernelTable* Avx2Kernels() {
#if defined(FEDCAV_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? Avx2KernelTableIfCompiled() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> AvailableKernels() {
  std::vector<const KernelTable*> out = {&ScalarKernels()};
  if (const KernelTable* avx2 = Avx2Kernels()) out.push_back(avx2);
  return out;
}

namespace {

const KernelTable* ByName(std::string_view name) {
  if (name == "scalar") return &ScalarKernels();
  if (name == "avx2") return Avx2Kernels();
  if (name == "auto") {
    const KernelTable* avx2 = Avx2Kernels();
    return avx2 ? avx2 : &ScalarKernels();
  }
  return nullptr;
}

const KernelTable* InitialTable() {
  const char* env = std::getenv("FEDCAV_SIMD");
  const std::string requested = env ? env : "auto";
  if (const KernelTable* t = ByName(requested)) return t;
  Log(LogLevel::kWarn, "FEDCAV_SIMD=" + requested +
                           " unavailable on this machine; using auto");
  return ByName("auto");
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{InitialTable()};
  return slot;
}

}  // namespace

const KernelTable& Active() { return *ActiveSlot().load(std::memory_order_acquire); }

bool SelectKernels(std::string_view name) {
  const KernelTable* t = ByName(name);
  if (t == nullptr) return false;
  ActiveSlot().store(t, std::memory_order_release);
  return true;
}

}  // namespace fedcav::simd
