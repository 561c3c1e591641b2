#pragma once

#include <cstddef>

#include "pqc/kernel/modp.hpp"

namespace pqc::kernel::impl {

// Unchecked kernels. Callers guarantee equal lengths and in-range operands.

void montymul_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p, Word p0i);
void add_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p);
void sub_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p);

#if defined(PQC_HAVE_AVX2)
void montymul_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p, Word p0i);
void add_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p);
void sub_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p);
#endif

}  // namespace pqc::kernel::impl
