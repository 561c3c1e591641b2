#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pqc/common/error.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/kernel/limbs.hpp"
#include "pqc/kernel/zint.hpp"

namespace pqc::kernel {
namespace {

namespace oracle = pqc::testing;
constexpr auto U = Signedness::Unsigned;
constexpr auto S = Signedness::Signed;

LimbVector random_limbs(DeterministicRng& rng, std::size_t len, Signedness s) {
  std::vector<Word> w(len);
  for (auto& x : w) {
    const auto pick = rng.below(6);
    x = pick == 0 ? 0 : pick == 1 ? kLimbMask : rng.word31();
  }
  return LimbVector(std::move(w), s);
}

TEST(LimbVector, RejectsWideLimbsAndEmpty) {
  EXPECT_THROW(LimbVector({0x80000000u}, U), DataError);
  EXPECT_THROW(LimbVector({}, U), DataError);
}

TEST(LimbsEncode, ZeroAndMinusOne) {
  EXPECT_EQ(limbs_encode(0, 4, U), LimbVector::zeros(4, U));
  EXPECT_EQ(limbs_encode(-1, 2, S), LimbVector({kLimbMask, kLimbMask}, S));
}

TEST(LimbsEncode, WindowBounds) {
  const BigInt top = BigInt(1) << 62;
  EXPECT_NO_THROW(limbs_encode(top - 1, 2, U));
  EXPECT_THROW(limbs_encode(top, 2, U), DataError);
  EXPECT_THROW(limbs_encode(-1, 2, U), DataError);
  EXPECT_NO_THROW(limbs_encode(-(top / 2), 2, S));
  EXPECT_THROW(limbs_encode(top / 2, 2, S), DataError);
  EXPECT_THROW(limbs_encode(-(top / 2) - 1, 2, S), DataError);
  EXPECT_THROW(limbs_encode(0, 0, U), DataError);
}

TEST(LimbsEncode, RoundTripProperty) {
  DeterministicRng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t len = rng.between(1, 12);
    const auto s = rng.coin() ? S : U;
    const LimbVector x = random_limbs(rng, len, s);
    const BigInt v = limbs_decode(x);
    const BigInt expected =
        s == S ? oracle::value_signed(x.limbs()) : oracle::value_unsigned(x.limbs());
    ASSERT_EQ(v, expected);
    ASSERT_EQ(limbs_encode(v, len, s), x);
  }
}

TEST(ZintAddMulSmall, NoCarry) {
  const auto r = zint_add_mul_small(LimbVector::zeros(3, U), LimbVector({1, 0, 0}, U), 5);
  EXPECT_EQ(r, LimbVector({5, 0, 0, 0}, U));
}

TEST(ZintAddMulSmall, SingleForcedCarry) {
  const auto r = zint_add_mul_small(LimbVector({kLimbMask}, U), LimbVector({1}, U), 1);
  EXPECT_EQ(r, LimbVector({0, 1}, U));
}

TEST(ZintAddMulSmall, Errors) {
  EXPECT_THROW(zint_add_mul_small(LimbVector::zeros(2, U), LimbVector::zeros(3, U), 1), DataError);
  EXPECT_THROW(zint_add_mul_small(LimbVector::zeros(2, U), LimbVector::zeros(2, U), 0x80000000u),
               DataError);
}

TEST(ZintAddMulSmall, RandomAgainstOracle) {
  DeterministicRng rng(17);
  for (int i = 0; i < 3000; ++i) {
    const std::size_t len = rng.between(1, 64);
    const auto x = random_limbs(rng, len, U);
    const auto y = random_limbs(rng, len, U);
    const Word s = rng.coin() ? rng.word31() : kLimbMask;
    const auto r = zint_add_mul_small(x, y, s);
    ASSERT_EQ(r.size(), len + 1);
    ASSERT_EQ(oracle::value_unsigned(r.limbs()),
              oracle::value_unsigned(x.limbs()) + oracle::value_unsigned(y.limbs()) * s);
  }
}

TEST(ZintAddMulSmall, LinearityInMultiplier) {
  DeterministicRng rng(19);
  for (int i = 0; i < 500; ++i) {
    const std::size_t len = rng.between(1, 16);
    const auto x = random_limbs(rng, len, U);
    const auto y = random_limbs(rng, len, U);
    const Word s1 = rng.word31() >> 1;
    const Word s2 = rng.word31() >> 1;
    // Apply s1, then s2 against y widened by one zero limb.
    const auto once = zint_add_mul_small(x, y, s1);
    std::vector<Word> wide(y.limbs().begin(), y.limbs().end());
    wide.push_back(0);
    const auto twice = zint_add_mul_small(once, LimbVector(wide, U), s2);
    const auto combined = zint_add_mul_small(x, y, s1 + s2);
    ASSERT_EQ(limbs_decode(twice), limbs_decode(combined));
  }
}

TEST(ZintAddScaledMulSmall, ZeroMultiplierLeavesXUnchanged) {
  const LimbVector x({1, 2, 3}, S);
  EXPECT_EQ(zint_add_scaled_mul_small(x, LimbVector({kLimbMask}, S), 0, {0, 7}), x);
}

TEST(ZintAddScaledMulSmall, PureLimbShift) {
  const auto r = zint_add_scaled_mul_small(LimbVector::zeros(3, S), LimbVector({1}, S), 1,
                                           ScaleFactor::from_bits(31));
  EXPECT_EQ(r, LimbVector({0, 1, 0}, S));
}

TEST(ZintAddScaledMulSmall, Errors) {
  EXPECT_THROW(zint_add_scaled_mul_small(LimbVector::zeros(2, S), LimbVector::zeros(3, S), 1, {}),
               DataError);
  EXPECT_THROW(
      zint_add_scaled_mul_small(LimbVector::zeros(2, S), LimbVector::zeros(1, S), 1, {0, 31}),
      DataError);
}

TEST(ZintAddScaledMulSmall, RandomWithTruncationAgainstOracle) {
  DeterministicRng rng(23);
  for (int i = 0; i < 3000; ++i) {
    const std::size_t xlen = rng.between(1, 40);
    const std::size_t ylen = rng.between(1, xlen);
    const auto x = random_limbs(rng, xlen, S);
    const auto y = random_limbs(rng, ylen, S);
    const auto k = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next()));
    const ScaleFactor sc{static_cast<std::uint32_t>(rng.below(xlen + 1)),
                         static_cast<std::uint32_t>(rng.below(31))};
    const auto r = zint_add_scaled_mul_small(x, y, k, sc);
    const auto expected = oracle::signed_window(
        oracle::value_signed(x.limbs()) +
            oracle::value_signed(y.limbs()) * k * oracle::pow2(static_cast<unsigned>(sc.bits())),
        xlen);
    ASSERT_EQ(oracle::value_signed(r.limbs()), expected) << "iteration " << i;
  }
}

TEST(ZintAddScaledMulSmall, ZeroShiftWithoutTruncationIsExact) {
  DeterministicRng rng(29);
  for (int i = 0; i < 500; ++i) {
    const std::size_t ylen = rng.between(1, 8);
    // Two spare limbs of headroom: |y*k| < 2^(31 ylen + 31).
    const std::size_t xlen = ylen + 2;
    const auto y = random_limbs(rng, ylen, S);
    const BigInt xv = limbs_decode(random_limbs(rng, ylen, S));
    const auto x = limbs_encode(xv, xlen, S);
    const auto k = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next()));
    const auto r = zint_add_scaled_mul_small(x, y, k, {});
    ASSERT_EQ(limbs_decode(r), xv + limbs_decode(y) * k);
  }
}

TEST(ZintModSmallUnsigned, ValueBelowModulus) {
  const auto q = ModpParams::make(2147473409u);
  EXPECT_EQ(zint_mod_small_unsigned(LimbVector({5}, U), q), 5u);
}

TEST(ZintModSmallUnsigned, TwoToThe31) {
  const auto q = ModpParams::make(2147473409u);
  const Word expected = static_cast<Word>(oracle::mod_floor(oracle::pow2(31), q.p));
  ASSERT_EQ(expected, 10239u);
  EXPECT_EQ(zint_mod_small_unsigned(LimbVector({0, 1}, U), q), expected);
}

TEST(ZintModSmallUnsigned, RejectsNonFalconModulus) {
  EXPECT_THROW(zint_mod_small_unsigned(LimbVector({5}, U), ModpParams::make(7)), DataError);
}

TEST(ZintModSmallUnsigned, RandomAgainstOracle) {
  DeterministicRng rng(31);
  for (int i = 0; i < 3000; ++i) {
    const auto q = ModpParams::make(static_cast<Word>(rng.between(1u << 30, kLimbMask)) | 1u);
    const auto d = random_limbs(rng, rng.between(1, 64), U);
    ASSERT_EQ(zint_mod_small_unsigned(d, q),
              static_cast<Word>(oracle::mod_floor(oracle::value_unsigned(d.limbs()), q.p)));
    ASSERT_EQ(zint_mod_small_unsigned(d, q), static_cast<Word>(limbs_decode(d) % q.p));
  }
}

}  // namespace
}  // namespace pqc::kernel
