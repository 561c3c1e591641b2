#pragma once

#include <cstdint>
#include <random>

namespace pqc {

/// Seeded generator whose output is identical on every platform.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so all range reduction goes through the helpers here.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform value in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform value in [lo, hi] (inclusive).
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  std::uint32_t word31() { return static_cast<std::uint32_t>(engine_() & 0x7FFFFFFFu); }

  bool coin() { return (engine_() & 1u) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pqc
