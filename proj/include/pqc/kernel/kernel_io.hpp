#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pqc/common/rng.hpp"
#include "pqc/kernel/limbs.hpp"
#include "pqc/kernel/modp.hpp"

namespace pqc::kernel {

/// The four kernels selected for hardware acceleration.
enum class KernelId { modp_montymul, modp_add, zint_add_scaled_mul_small, zint_mod_small_unsigned };

inline constexpr KernelId kAllKernels[] = {KernelId::modp_montymul, KernelId::modp_add,
                                           KernelId::zint_add_scaled_mul_small,
                                           KernelId::zint_mod_small_unsigned};

std::string_view to_string(KernelId id);
std::optional<KernelId> parse_kernel_id(std::string_view name);
bool is_limb_kernel(KernelId id);

struct MontyMulInput {
  Word a = 0;
  Word b = 0;
  ModpParams params;
  friend bool operator==(const MontyMulInput&, const MontyMulInput&) = default;
};

struct ModAddInput {
  Word a = 0;
  Word b = 0;
  Word p = 0;
  friend bool operator==(const ModAddInput&, const ModAddInput&) = default;
};

struct AddScaledInput {
  LimbVector x;
  LimbVector y;
  std::int32_t k = 0;
  ScaleFactor scale;
  friend bool operator==(const AddScaledInput&, const AddScaledInput&) = default;
};

struct ModSmallInput {
  LimbVector d;
  ModpParams params;
  friend bool operator==(const ModSmallInput&, const ModSmallInput&) = default;
};

using KernelInput = std::variant<MontyMulInput, ModAddInput, AddScaledInput, ModSmallInput>;
using KernelOutput = std::variant<Word, LimbVector>;

KernelId kernel_of(const KernelInput& input);

/// Limb count that drives the cost of the limb kernels (xlen or dlen); 0 for
/// the scalar kernels.
std::size_t operand_limbs(const KernelInput& input);

/// Runs the reference kernel. Throws DataError on precondition violations.
KernelOutput evaluate(const KernelInput& input);

std::string describe(const KernelInput& input);
std::string describe(const KernelOutput& output);

struct TestVector {
  KernelInput input;
  KernelOutput expected;
};

/// Edge vectors (zero operands, all-ones limbs, wraparound) followed by n
/// random vectors. Same (kernel, n, seed) always yields the same list.
std::vector<KernelInput> generate_inputs(KernelId kernel, std::size_t n, std::uint64_t seed);

/// One random input. For the limb kernels, `limbs` fixes xlen or dlen;
/// otherwise it is drawn from the rng.
KernelInput random_input(KernelId kernel, DeterministicRng& rng,
                         std::optional<std::size_t> limbs = std::nullopt);

/// Number of edge vectors generate_inputs emits ahead of the random ones.
std::size_t edge_vector_count(KernelId kernel);

/// One vector per line, lowercase hex fields separated by single spaces,
/// inputs first and expected output last. Lines starting with '#' are comments.
///
///   modp_montymul:             a b p p0i | out
///   modp_add:                  a b p | out
///   zint_add_scaled_mul_small: xlen ylen k sch scl x[xlen] y[ylen] | out[xlen]
///   zint_mod_small_unsigned:   dlen p p0i r2 d[dlen] | out
///
/// k is written as its 32-bit two's-complement pattern.
std::string format_vector_line(const TestVector& v);
std::string format_vector_file(KernelId kernel, const std::vector<TestVector>& vectors,
                               const std::vector<std::string>& header_comments = {});

struct VectorFile {
  KernelId kernel;
  std::vector<TestVector> vectors;
};

/// Parses a vector file. The kernel comes from a "# kernel=<id>" comment
/// unless given explicitly. Throws ParseError with the line number.
VectorFile parse_vector_file(std::string_view text, std::optional<KernelId> kernel = std::nullopt);

}  // namespace pqc::kernel
