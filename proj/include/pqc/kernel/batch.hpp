#pragma once

// Element-wise modp kernels over spans. A scalar reference and an AVX2
// variant exist; the fastest one the CPU supports is picked at runtime.
// Setting PQC_SIMD=scalar in the environment pins the scalar path.

#include <span>
#include <string_view>

#include "pqc/kernel/modp.hpp"

namespace pqc::kernel {

enum class SimdLevel { scalar, avx2 };

std::string_view to_string(SimdLevel level);

/// True if this build and this CPU can run the given level.
bool simd_supported(SimdLevel level);

/// Highest supported level, honoring the PQC_SIMD override. Computed once.
SimdLevel best_simd_level();

// All inputs are validated (each operand < p, equal span lengths) before any
// output is written. Requesting an unsupported level throws UsageError.

void modp_montymul_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out,
                         const ModpParams& params, SimdLevel level = best_simd_level());

void modp_add_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out, Word p,
                    SimdLevel level = best_simd_level());

void modp_sub_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out, Word p,
                    SimdLevel level = best_simd_level());

}  // namespace pqc::kernel
