#include "pqc/kernel/modp.hpp"

#include <string>

#include "pqc/common/error.hpp"

namespace pqc::kernel {

namespace detail {

void check_modulus(Word p) {
  if (p <= 1 || p >= (Word{1} << 31) || (p & 1u) == 0) {
    throw DataError("modulus " + std::to_string(p) + " must be odd with 1 < p < 2^31");
  }
}

void check_operand(Word v, Word p, const char* name) {
  if (v >= p) {
    throw DataError(std::string("operand ") + name + "=" + std::to_string(v) +
                    " not below modulus " + std::to_string(p));
  }
}

}  // namespace detail

Word modp_ninv31(Word p) {
  detail::check_modulus(p);
  // Newton iteration on 2-adic inverse; each step doubles the correct bits.
  Word y = 2 - p;
  y *= 2 - p * y;
  y *= 2 - p * y;
  y *= 2 - p * y;
  y *= 2 - p * y;
  return kLimbMask & -y;
}

Word modp_R2(Word p) {
  detail::check_modulus(p);
  return static_cast<Word>((std::uint64_t{1} << 62) % p);
}

ModpParams ModpParams::make(Word p) {
  ModpParams params;
  params.p = p;
  params.p0i = modp_ninv31(p);
  params.r2 = modp_R2(p);
  params.falcon_range = p > (Word{1} << 30);
  return params;
}

Word modp_montymul(Word a, Word b, const ModpParams& params) {
  detail::check_modulus(params.p);
  detail::check_operand(a, params.p, "a");
  detail::check_operand(b, params.p, "b");
  return detail::montymul_unchecked(a, b, params.p, params.p0i);
}

Word modp_add(Word a, Word b, Word p) {
  detail::check_modulus(p);
  detail::check_operand(a, p, "a");
  detail::check_operand(b, p, "b");
  return detail::add_unchecked(a, b, p);
}

Word modp_sub(Word a, Word b, Word p) {
  detail::check_modulus(p);
  detail::check_operand(a, p, "a");
  detail::check_operand(b, p, "b");
  return detail::sub_unchecked(a, b, p);
}

Word to_monty(Word a, const ModpParams& params) { return modp_montymul(a, params.r2, params); }

Word from_monty(Word a, const ModpParams& params) {
  return modp_montymul(a, 1, params);
}

}  // namespace pqc::kernel
