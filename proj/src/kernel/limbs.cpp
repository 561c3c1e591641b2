#include "pqc/kernel/limbs.hpp"

#include <string>

#include "pqc/common/error.hpp"

namespace pqc::kernel {

LimbVector::LimbVector(std::vector<Word> limbs, Signedness signedness)
    : limbs_(std::move(limbs)), signedness_(signedness) {
  if (limbs_.empty()) {
    throw DataError("limb vector must have at least one limb");
  }
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    if (limbs_[i] > kLimbMask) {
      throw DataError("limb " + std::to_string(i) + " = " + std::to_string(limbs_[i]) +
                      " exceeds 31 bits");
    }
  }
}

LimbVector LimbVector::zeros(std::size_t len, Signedness signedness) {
  return LimbVector(std::vector<Word>(len, 0), signedness);
}

namespace {

BigInt pow2(std::size_t bits) {
  BigInt one = 1;
  return one << bits;
}

}  // namespace

BigInt wrap_to_window(const BigInt& v, std::size_t len, Signedness signedness) {
  const BigInt modulus = pow2(31 * len);
  BigInt r = v % modulus;
  if (r < 0) {
    r += modulus;
  }
  if (signedness == Signedness::Signed && r >= pow2(31 * len - 1)) {
    r -= modulus;
  }
  return r;
}

LimbVector limbs_encode(const BigInt& v, std::size_t len, Signedness signedness) {
  if (len == 0) {
    throw DataError("limb count must be at least 1");
  }
  const std::size_t bits = 31 * len;
  BigInt lo = 0;
  BigInt hi = pow2(bits);
  if (signedness == Signedness::Signed) {
    lo = -pow2(bits - 1);
    hi = pow2(bits - 1);
  }
  if (v < lo || v >= hi) {
    throw DataError("value does not fit in " + std::to_string(len) + " limbs");
  }
  BigInt u = v;
  if (u < 0) {
    u += pow2(bits);
  }
  std::vector<Word> limbs(len);
  for (std::size_t i = 0; i < len; ++i) {
    limbs[i] = static_cast<Word>(u & kLimbMask);
    u >>= 31;
  }
  return LimbVector(std::move(limbs), signedness);
}

BigInt limbs_decode(const LimbVector& x) {
  BigInt v = 0;
  for (std::size_t i = x.size(); i-- > 0;) {
    v <<= 31;
    v += x[i];
  }
  if (x.signedness() == Signedness::Signed && (x[x.size() - 1] >> 30) != 0) {
    v -= pow2(31 * x.size());
  }
  return v;
}

}  // namespace pqc::kernel
