#pragma once

// Single-word modular arithmetic over an odd modulus p < 2^31, with
// Montgomery radix R = 2^31. These are the scalar reference kernels; every
// accelerated or simulated variant is checked against them.

#include <cstdint>

namespace pqc::kernel {

using Word = std::uint32_t;

inline constexpr Word kLimbMask = 0x7FFFFFFFu;

/// Modulus plus its Montgomery companion constants.
struct ModpParams {
  Word p = 0;
  Word p0i = 0;  // -p^-1 mod 2^31
  Word r2 = 0;   // 2^62 mod p
  bool falcon_range = false;  // 2^30 < p < 2^31

  /// Derives p0i and r2. Throws DataError for even p or p outside (1, 2^31).
  static ModpParams make(Word p);

  friend bool operator==(const ModpParams&, const ModpParams&) = default;
};

/// Returns q with p*q = -1 (mod 2^31).
Word modp_ninv31(Word p);

/// Returns 2^62 mod p.
Word modp_R2(Word p);

/// (a * b / 2^31) mod p. Requires a, b < p.
Word modp_montymul(Word a, Word b, const ModpParams& params);

/// (a + b) mod p. Requires a, b < p.
Word modp_add(Word a, Word b, Word p);

/// (a - b) mod p. Requires a, b < p.
Word modp_sub(Word a, Word b, Word p);

/// a * 2^31 mod p, i.e. montymul(a, r2).
Word to_monty(Word a, const ModpParams& params);

/// a / 2^31 mod p, i.e. montymul(a, 1).
Word from_monty(Word a, const ModpParams& params);

namespace detail {

// Unchecked bodies shared by the checked entry points, the batch kernels and
// the SIMD tail loops. Inputs must already satisfy the preconditions.
inline Word montymul_unchecked(Word a, Word b, Word p, Word p0i) {
  const std::uint64_t z = static_cast<std::uint64_t>(a) * b;
  const std::uint64_t w = ((z * p0i) & kLimbMask) * p;
  Word d = static_cast<Word>((z + w) >> 31) - p;
  d += p & -(d >> 31);
  return d;
}

inline Word add_unchecked(Word a, Word b, Word p) {
  Word d = a + b - p;
  d += p & -(d >> 31);
  return d;
}

inline Word sub_unchecked(Word a, Word b, Word p) {
  Word d = a - b;
  d += p & -(d >> 31);
  return d;
}

void check_modulus(Word p);
void check_operand(Word v, Word p, const char* name);

}  // namespace detail

}  // namespace pqc::kernel
