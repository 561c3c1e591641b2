#pragma once

// Arbitrary-precision reference arithmetic for tests. Nothing here calls the
// limb loops or the Montgomery code under test.

#include <cstdint>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

namespace pqc::testing {

using Big = boost::multiprecision::cpp_int;

inline Big pow2(unsigned bits) { return Big(1) << bits; }

inline Big mod_floor(const Big& v, const Big& m) {
  Big r = v % m;
  if (r < 0) r += m;
  return r;
}

/// Modular inverse by the extended Euclidean algorithm.
inline Big inverse_mod(const Big& a, const Big& m) {
  Big old_r = mod_floor(a, m), r = m;
  Big old_s = 1, s = 0;
  while (r != 0) {
    const Big q = old_r / r;
    Big t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("not invertible");
  return mod_floor(old_s, m);
}

inline std::uint32_t ninv31(std::uint32_t p) {
  const Big m = pow2(31);
  return static_cast<std::uint32_t>(mod_floor(-inverse_mod(p, m), m));
}

inline std::uint32_t r2(std::uint32_t p) {
  return static_cast<std::uint32_t>(boost::multiprecision::powm(Big(2), Big(62), Big(p)));
}

inline std::uint32_t montymul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  const Big rinv = inverse_mod(pow2(31), p);
  return static_cast<std::uint32_t>(mod_floor(Big(a) * b * rinv, p));
}

/// Unsigned value of base-2^31 limbs, least significant first.
inline Big value_unsigned(std::span<const std::uint32_t> limbs) {
  Big v = 0;
  for (std::size_t i = limbs.size(); i-- > 0;) v = v * pow2(31) + limbs[i];
  return v;
}

/// Two's-complement value over 31*len bits.
inline Big value_signed(std::span<const std::uint32_t> limbs) {
  const unsigned bits = 31 * static_cast<unsigned>(limbs.size());
  Big v = value_unsigned(limbs);
  if (v >= pow2(bits - 1)) v -= pow2(bits);
  return v;
}

/// Reduces v into the signed window of len limbs.
inline Big signed_window(const Big& v, std::size_t len) {
  const unsigned bits = 31 * static_cast<unsigned>(len);
  Big r = mod_floor(v, pow2(bits));
  if (r >= pow2(bits - 1)) r -= pow2(bits);
  return r;
}

}  // namespace pqc::testing
