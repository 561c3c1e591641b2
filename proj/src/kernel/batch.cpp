#include "pqc/kernel/batch.hpp"

#include <cstdlib>
#include <string>

#include "batch_impl.hpp"
#include "pqc/common/error.hpp"

namespace pqc::kernel {

std::string_view to_string(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return "scalar";
    case SimdLevel::avx2:
      return "avx2";
  }
  return "unknown";
}

bool simd_supported(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return true;
    case SimdLevel::avx2:
#if defined(PQC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

SimdLevel best_simd_level() {
  static const SimdLevel level = [] {
    const char* forced = std::getenv("PQC_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") {
      return SimdLevel::scalar;
    }
    return simd_supported(SimdLevel::avx2) ? SimdLevel::avx2 : SimdLevel::scalar;
  }();
  return level;
}

namespace {

void check_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out, Word p,
                 SimdLevel level) {
  detail::check_modulus(p);
  if (a.size() != b.size() || a.size() != out.size()) {
    throw DataError("batch operands have mismatched lengths");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= p || b[i] >= p) {
      throw DataError("batch element " + std::to_string(i) + " not below modulus " +
                      std::to_string(p));
    }
  }
  if (!simd_supported(level)) {
    throw UsageError("SIMD level " + std::string(to_string(level)) + " not supported here");
  }
}

}  // namespace

void modp_montymul_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out,
                         const ModpParams& params, SimdLevel level) {
  check_batch(a, b, out, params.p, level);
#if defined(PQC_HAVE_AVX2)
  if (level == SimdLevel::avx2) {
    impl::montymul_avx2(a.data(), b.data(), out.data(), a.size(), params.p, params.p0i);
    return;
  }
#endif
  impl::montymul_scalar(a.data(), b.data(), out.data(), a.size(), params.p, params.p0i);
}

void modp_add_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out, Word p,
                    SimdLevel level) {
  check_batch(a, b, out, p, level);
#if defined(PQC_HAVE_AVX2)
  if (level == SimdLevel::avx2) {
    impl::add_avx2(a.data(), b.data(), out.data(), a.size(), p);
    return;
  }
#endif
  impl::add_scalar(a.data(), b.data(), out.data(), a.size(), p);
}

void modp_sub_batch(std::span<const Word> a, std::span<const Word> b, std::span<Word> out, Word p,
                    SimdLevel level) {
  check_batch(a, b, out, p, level);
#if defined(PQC_HAVE_AVX2)
  if (level == SimdLevel::avx2) {
    impl::sub_avx2(a.data(), b.data(), out.data(), a.size(), p);
    return;
  }
#endif
  impl::sub_scalar(a.data(), b.data(), out.data(), a.size(), p);
}

}  // namespace pqc::kernel
