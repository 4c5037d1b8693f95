// Copyright 2026 The AFLite Authors.
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

#include <cstdlib>
#include <string_view>

#include "aflite/kernels.hpp"

namespace aflite::kernels {

namespace detail {
#if defined(AFLITE_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(AFLITE_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif
}  // namespace detail

const KernelTable* avx2_table() {
#if defined(AFLITE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(AFLITE_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &detail::neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& Resolve() {
  if (const char* env = std::getenv("AFLITE_SIMD")) {
    if (std::string_view(env) == "scalar") return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = Resolve();
  return table;
}

}  // namespace aflite::kernels
