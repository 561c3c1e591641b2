#include <gtest/gtest.h>

#include "pqc/common/error.hpp"
#include "pqc/kernel/kernel_io.hpp"

namespace pqc::kernel {
namespace {

std::vector<TestVector> with_expected(const std::vector<KernelInput>& inputs) {
  std::vector<TestVector> out;
  for (const auto& in : inputs) out.push_back({in, evaluate(in)});
  return out;
}

TEST(KernelId, NamesRoundTrip) {
  for (KernelId id : kAllKernels) {
    EXPECT_EQ(parse_kernel_id(to_string(id)), id);
  }
  EXPECT_FALSE(parse_kernel_id("poly_inv").has_value());
}

TEST(GenerateInputs, EdgeVectorsComeFirst) {
  const auto inputs = generate_inputs(KernelId::modp_add, 1, 0);
  ASSERT_EQ(inputs.size(), edge_vector_count(KernelId::modp_add) + 1);
  const auto& first = std::get<ModAddInput>(inputs.front());
  EXPECT_EQ(first.a, first.p - 1);
  EXPECT_EQ(first.b, 1u);
  EXPECT_EQ(std::get<Word>(evaluate(inputs.front())), 0u);
}

TEST(GenerateInputs, DeterministicPerSeed) {
  for (KernelId id : kAllKernels) {
    EXPECT_EQ(generate_inputs(id, 50, 9), generate_inputs(id, 50, 9));
    EXPECT_NE(generate_inputs(id, 50, 9), generate_inputs(id, 50, 10));
  }
}

TEST(VectorFile, RoundTripsEveryKernel) {
  for (KernelId id : kAllKernels) {
    const auto vectors = with_expected(generate_inputs(id, 40, 1234));
    const std::string text = format_vector_file(id, vectors, {"seed=1234"});
    const VectorFile parsed = parse_vector_file(text);
    EXPECT_EQ(parsed.kernel, id);
    ASSERT_EQ(parsed.vectors.size(), vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      EXPECT_EQ(parsed.vectors[i].input, vectors[i].input);
      EXPECT_EQ(parsed.vectors[i].expected, vectors[i].expected);
    }
    EXPECT_EQ(format_vector_file(id, parsed.vectors, {"seed=1234"}), text);
  }
}

TEST(VectorFile, LowercaseHexLayout) {
  const TestVector v{ModAddInput{0x7ffffffe, 1, 0x7fffffff}, Word{0}};
  EXPECT_EQ(format_vector_line(v), "7ffffffe 1 7fffffff 0");
  const TestVector neg{AddScaledInput{LimbVector::zeros(1, Signedness::Signed),
                                      LimbVector({1}, Signedness::Signed), -1, {0, 0}},
                       LimbVector({0x7fffffff}, Signedness::Signed)};
  EXPECT_EQ(format_vector_line(neg), "1 1 ffffffff 0 0 0 1 7fffffff");
}

TEST(VectorFile, ParseErrorsCarryLineNumbers) {
  try {
    parse_vector_file("# kernel=modp_add\n1 2 7 3\n1 zz 7 3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_vector_file("1 2 7 3\n"), ParseError);
  EXPECT_THROW(parse_vector_file("# kernel=nope\n"), ParseError);
  EXPECT_THROW(parse_vector_file("# kernel=modp_add\n1 2 7\n"), ParseError);
  EXPECT_THROW(parse_vector_file("# kernel=modp_add\n1 2 7 3 4\n"), ParseError);
  EXPECT_THROW(parse_vector_file("# kernel=modp_montymul\n1 2 7 0 3\n"), ParseError);
  EXPECT_THROW(parse_vector_file("# nothing\n"), DataError);
}

}  // namespace
}  // namespace pqc::kernel
