#pragma once

// Multi-limb routines from the NTRU solver. Limb loops mirror the reference
// implementation word for word so that hardware models can follow them.

#include <cstdint>

#include "pqc/kernel/limbs.hpp"
#include "pqc/kernel/modp.hpp"

namespace pqc::kernel {

/// x + y*s over unsigned limbs. x and y must have the same length; the result
/// is one limb longer and holds the final carry on top.
LimbVector zint_add_mul_small(const LimbVector& x, const LimbVector& y, Word s);

/// x + y*k*2^sc over signed limbs, truncated to x's length.
///
/// y may be shorter than x; it is sign-extended as needed. Bits that fall
/// beyond 31*xlen are dropped, which is reduction modulo 2^(31*xlen).
LimbVector zint_add_scaled_mul_small(const LimbVector& x, const LimbVector& y, std::int32_t k,
                                     ScaleFactor scale);

/// value(d) mod p for unsigned d. Needs the FALCON-range modulus (2^30 < p < 2^31)
/// because each limb is reduced with a single conditional subtraction.
Word zint_mod_small_unsigned(const LimbVector& d, const ModpParams& params);

}  // namespace pqc::kernel
