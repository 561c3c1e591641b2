#include "pqc/kernel/zint.hpp"

#include <bit>
#include <string>

#include "pqc/common/error.hpp"

namespace pqc::kernel {

LimbVector zint_add_mul_small(const LimbVector& x, const LimbVector& y, Word s) {
  if (x.size() != y.size()) {
    throw DataError("zint_add_mul_small: length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (s > kLimbMask) {
    throw DataError("zint_add_mul_small: multiplier " + std::to_string(s) + " exceeds 31 bits");
  }
  const std::size_t len = x.size();
  std::vector<Word> out(len + 1);
  Word cc = 0;
  for (std::size_t u = 0; u < len; ++u) {
    const std::uint64_t z = static_cast<std::uint64_t>(y[u]) * s + x[u] + cc;
    out[u] = static_cast<Word>(z) & kLimbMask;
    cc = static_cast<Word>(z >> 31);
  }
  out[len] = cc;
  return LimbVector(std::move(out), Signedness::Unsigned);
}

LimbVector zint_add_scaled_mul_small(const LimbVector& x, const LimbVector& y, std::int32_t k,
                                     ScaleFactor scale) {
  const std::size_t xlen = x.size();
  const std::size_t ylen = y.size();
  if (ylen > xlen) {
    throw DataError("zint_add_scaled_mul_small: ylen " + std::to_string(ylen) + " exceeds xlen " +
                    std::to_string(xlen));
  }
  if (scale.scl >= 31) {
    throw DataError("zint_add_scaled_mul_small: intra-limb shift " + std::to_string(scale.scl) +
                    " must be below 31");
  }
  std::vector<Word> out(x.limbs().begin(), x.limbs().end());
  const Word ysign = -(y[ylen - 1] >> 30) >> 1;
  const Word scl = scale.scl;
  Word tw = 0;
  std::int32_t cc = 0;
  for (std::size_t u = scale.sch; u < xlen; ++u) {
    const std::size_t v = u - scale.sch;
    const Word wy = v < ylen ? y[v] : ysign;
    const Word wys = ((wy << scl) & kLimbMask) | tw;
    tw = scl == 0 ? 0 : wy >> (31 - scl);
    const std::int64_t z = static_cast<std::int64_t>(wys) * k + out[u] + cc;
    out[u] = static_cast<Word>(z) & kLimbMask;
    // Arithmetic shift; the true carry always fits in 32 signed bits.
    cc = static_cast<std::int32_t>(z >> 31);
  }
  return LimbVector(std::move(out), Signedness::Signed);
}

Word zint_mod_small_unsigned(const LimbVector& d, const ModpParams& params) {
  detail::check_modulus(params.p);
  if (!params.falcon_range) {
    throw DataError("zint_mod_small_unsigned: modulus " + std::to_string(params.p) +
                    " outside 2^30 < p < 2^31");
  }
  const Word p = params.p;
  Word x = 0;
  for (std::size_t u = d.size(); u-- > 0;) {
    x = detail::montymul_unchecked(x, params.r2, p, params.p0i);
    Word w = d[u] - p;
    w += p & -(w >> 31);
    x = detail::add_unchecked(x, w, p);
  }
  return x;
}

}  // namespace pqc::kernel
