#include <gtest/gtest.h>

#include <vector>

#include "pqc/common/error.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/kernel/batch.hpp"

namespace pqc::kernel {
namespace {

std::vector<SimdLevel> supported_levels() {
  std::vector<SimdLevel> levels{SimdLevel::scalar};
  if (simd_supported(SimdLevel::avx2)) levels.push_back(SimdLevel::avx2);
  return levels;
}

struct Operands {
  std::vector<Word> a, b;
};

Operands random_operands(DeterministicRng& rng, std::size_t n, Word p) {
  Operands ops;
  for (std::size_t i = 0; i < n; ++i) {
    // Include the extremes often so lane-level corrections get exercised.
    const auto pick = rng.below(5);
    ops.a.push_back(pick == 0 ? p - 1 : pick == 1 ? 0 : static_cast<Word>(rng.below(p)));
    ops.b.push_back(pick == 2 ? p - 1 : static_cast<Word>(rng.below(p)));
  }
  return ops;
}

TEST(BatchSimd, ScalarAlwaysSupported) {
  EXPECT_TRUE(simd_supported(SimdLevel::scalar));
  EXPECT_TRUE(simd_supported(best_simd_level()));
}

TEST(BatchSimd, ExhaustiveSmallModuliEveryLevel) {
  for (Word p = 3; p <= 31; p += 2) {
    const auto q = ModpParams::make(p);
    std::vector<Word> a, b;
    for (Word x = 0; x < p; ++x) {
      for (Word y = 0; y < p; ++y) {
        a.push_back(x);
        b.push_back(y);
      }
    }
    std::vector<Word> out(a.size());
    for (SimdLevel level : supported_levels()) {
      modp_montymul_batch(a, b, out, q, level);
      for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(out[i], modp_montymul(a[i], b[i], q)) << to_string(level) << " p=" << p;
      }
      modp_add_batch(a, b, out, p, level);
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(out[i], modp_add(a[i], b[i], p));
      modp_sub_batch(a, b, out, p, level);
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(out[i], modp_sub(a[i], b[i], p));
    }
  }
}

TEST(BatchSimd, RandomFalconModuliMatchScalarReference) {
  DeterministicRng rng(77);
  for (int round = 0; round < 50; ++round) {
    const auto q = ModpParams::make(static_cast<Word>(rng.between(1u << 30, kLimbMask)) | 1u);
    // Odd lengths cover the scalar tail after the vector body.
    const std::size_t n = rng.between(1, 300);
    const auto ops = random_operands(rng, n, q.p);
    std::vector<Word> ref(n), out(n);
    modp_montymul_batch(ops.a, ops.b, ref, q, SimdLevel::scalar);
    for (SimdLevel level : supported_levels()) {
      modp_montymul_batch(ops.a, ops.b, out, q, level);
      ASSERT_EQ(out, ref) << to_string(level);
    }
    modp_add_batch(ops.a, ops.b, ref, q.p, SimdLevel::scalar);
    for (SimdLevel level : supported_levels()) {
      modp_add_batch(ops.a, ops.b, out, q.p, level);
      ASSERT_EQ(out, ref) << to_string(level);
    }
    modp_sub_batch(ops.a, ops.b, ref, q.p, SimdLevel::scalar);
    for (SimdLevel level : supported_levels()) {
      modp_sub_batch(ops.a, ops.b, out, q.p, level);
      ASSERT_EQ(out, ref) << to_string(level);
    }
  }
}

TEST(BatchSimd, ValidatesBeforeWriting) {
  const auto q = ModpParams::make(7);
  std::vector<Word> a{1, 2, 7}, b{1, 1, 1}, out{9, 9, 9};
  EXPECT_THROW(modp_montymul_batch(a, b, out, q), DataError);
  EXPECT_EQ(out, (std::vector<Word>{9, 9, 9}));
  std::vector<Word> short_out(2);
  EXPECT_THROW(modp_add_batch(b, b, short_out, 7), DataError);
}

TEST(BatchSimd, EmptySpansAreFine) {
  std::vector<Word> none;
  EXPECT_NO_THROW(modp_add_batch(none, none, none, 7));
}

}  // namespace
}  // namespace pqc::kernel
