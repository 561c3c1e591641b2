#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pqc/kernel/modp.hpp"

namespace pqc::kernel {

using BigInt = boost::multiprecision::cpp_int;

enum class Signedness { Unsigned, Signed };

/// Big integer in base 2^31, least-significant limb first.
///
/// Every limb is strictly below 2^31 and there is at least one limb. The
/// signed interpretation is two's complement over 31*len bits.
class LimbVector {
 public:
  LimbVector(std::vector<Word> limbs, Signedness signedness);

  static LimbVector zeros(std::size_t len, Signedness signedness);

  std::span<const Word> limbs() const noexcept { return limbs_; }
  std::size_t size() const noexcept { return limbs_.size(); }
  Signedness signedness() const noexcept { return signedness_; }
  Word operator[](std::size_t i) const { return limbs_[i]; }

  friend bool operator==(const LimbVector&, const LimbVector&) = default;

 private:
  std::vector<Word> limbs_;
  Signedness signedness_;
};

/// Shift amount split into whole limbs and bits within a limb.
struct ScaleFactor {
  std::uint32_t sch = 0;  // whole-limb shift
  std::uint32_t scl = 0;  // intra-limb shift, < 31

  std::uint64_t bits() const noexcept { return 31ull * sch + scl; }
  static ScaleFactor from_bits(std::uint64_t sc) {
    return {static_cast<std::uint32_t>(sc / 31), static_cast<std::uint32_t>(sc % 31)};
  }

  friend bool operator==(const ScaleFactor&, const ScaleFactor&) = default;
};

/// Encodes v into len limbs. Throws DataError when v is outside the window
/// [0, 2^(31 len)) for unsigned or [-2^(31 len - 1), 2^(31 len - 1)) for signed.
LimbVector limbs_encode(const BigInt& v, std::size_t len, Signedness signedness);

BigInt limbs_decode(const LimbVector& x);

/// Reduces v modulo 2^(31 len) into the window of the given signedness.
BigInt wrap_to_window(const BigInt& v, std::size_t len, Signedness signedness);

}  // namespace pqc::kernel
