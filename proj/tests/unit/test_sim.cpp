#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pqc/common/error.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/sim/pipeline.hpp"

using namespace pqc;
using namespace pqc::sim;
using kernel::KernelId;
namespace oracle = pqc::testing;

namespace {

const KernelModel& model(KernelId k, Variant v) { return reference_calibration().find(k, v); }

// Expected outputs straight from arbitrary-precision arithmetic.
kernel::KernelOutput big_oracle(const kernel::KernelInput& input) {
  return std::visit(
      [](const auto& in) -> kernel::KernelOutput {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, kernel::MontyMulInput>) {
          return oracle::montymul(in.a, in.b, in.params.p);
        } else if constexpr (std::is_same_v<T, kernel::ModAddInput>) {
          return static_cast<kernel::Word>((std::uint64_t{in.a} + in.b) % in.p);
        } else if constexpr (std::is_same_v<T, kernel::AddScaledInput>) {
          const oracle::Big v = oracle::value_signed(in.x.limbs()) +
                                oracle::value_signed(in.y.limbs()) * in.k *
                                    oracle::pow2(31 * in.scale.sch + in.scale.scl);
          const auto w = oracle::signed_window(v, in.x.size());
          return kernel::limbs_encode(w, in.x.size(), kernel::Signedness::Signed);
        } else {
          const auto r = oracle::mod_floor(oracle::value_unsigned(in.d.limbs()), in.params.p);
          return static_cast<kernel::Word>(r);
        }
      },
      input);
}

constexpr Variant kVariants[] = {Variant::deep_pipelined, Variant::sequential};

}  // namespace

// ---- calibration -----------------------------------------------------------

TEST(Calibration, ReproducesPublishedCycleCounts) {
  // (kernel, deep cycles, sequential cycles) as published.
  const std::tuple<KernelId, std::uint64_t, std::uint64_t> table[] = {
      {KernelId::modp_montymul, 6, 3},
      {KernelId::modp_add, 3, 4},
      {KernelId::zint_add_scaled_mul_small, 101, 199},
      {KernelId::zint_mod_small_unsigned, 67, 30}};
  for (const auto& [k, deep, seq] : table) {
    const auto& d = model(k, Variant::deep_pipelined);
    const auto& s = model(k, Variant::sequential);
    EXPECT_EQ(latency(d, d.reference_shape()), deep) << kernel::to_string(k);
    EXPECT_EQ(latency(s, s.reference_shape()), seq) << kernel::to_string(k);
  }
}

TEST(Calibration, ReferenceShapesAndLinearCost) {
  const auto& as_deep = model(KernelId::zint_add_scaled_mul_small, Variant::deep_pipelined);
  EXPECT_EQ(as_deep.reference_limbs, 96u);
  for (std::size_t n : {1u, 10u, 96u}) {
    EXPECT_EQ(latency(as_deep, {n}), n + 5);
    EXPECT_EQ(latency(model(KernelId::zint_add_scaled_mul_small, Variant::sequential), {n}), 2 * n + 7);
    EXPECT_EQ(latency(model(KernelId::zint_mod_small_unsigned, Variant::deep_pipelined), {n}), 2 * n + 11);
    EXPECT_EQ(latency(model(KernelId::zint_mod_small_unsigned, Variant::sequential), {n}), n + 2);
  }
  EXPECT_EQ(model(KernelId::zint_mod_small_unsigned, Variant::sequential).reference_limbs, 28u);
}

TEST(Calibration, ScalarKernelsIgnoreShapeLimbKernelsNeedOne) {
  EXPECT_EQ(latency(model(KernelId::modp_add, Variant::sequential), {57}), 4u);
  EXPECT_THROW(latency(model(KernelId::zint_mod_small_unsigned, Variant::deep_pipelined), {0}),
               DataError);
}

TEST(Calibration, FormatParseRoundTrip) {
  const auto text = format_calibration(reference_calibration());
  const auto back = parse_calibration(text);
  EXPECT_EQ(back.models, reference_calibration().models);
  EXPECT_EQ(format_calibration(back), text);
}

TEST(Calibration, RejectsBrokenModels) {
  auto text = format_calibration(reference_calibration());
  auto broken = text;
  broken.replace(broken.find("\"latency_base\": 6"), 17, "\"latency_base\": 0");
  EXPECT_THROW(parse_calibration(broken), DataError);

  KernelModel m = model(KernelId::modp_montymul, Variant::deep_pipelined);
  m.initiation_interval = 2;
  EXPECT_THROW(validate(m), DataError);
  m = model(KernelId::modp_add, Variant::sequential);
  m.per_limb_cycles = 1;
  EXPECT_THROW(validate(m), DataError);
}

// ---- throughput ------------------------------------------------------------

TEST(Throughput, Formula) {
  EXPECT_EQ(stream_throughput(model(KernelId::modp_montymul, Variant::deep_pipelined), 100), 105u);
  EXPECT_EQ(stream_throughput(model(KernelId::modp_montymul, Variant::sequential), 100), 300u);
  for (auto k : kernel::kAllKernels) {
    for (auto v : kVariants) {
      const auto& m = model(k, v);
      EXPECT_EQ(stream_throughput(m, 1, m.reference_shape()), latency(m, m.reference_shape()));
    }
  }
  EXPECT_THROW(stream_throughput(model(KernelId::modp_add, Variant::deep_pipelined), 0), UsageError);
}

TEST(Throughput, SequentialModelsDoNotOverlap) {
  for (auto k : kernel::kAllKernels) {
    const auto& m = model(k, Variant::sequential);
    EXPECT_EQ(initiation_interval(m, m.reference_shape()), latency(m, m.reference_shape()));
  }
}

TEST(Throughput, SimulatedStreamMatchesFormula) {
  DeterministicRng rng(11);
  for (auto k : kernel::kAllKernels) {
    for (auto v : kVariants) {
      const auto& m = model(k, v);
      const std::optional<std::size_t> limbs =
          kernel::is_limb_kernel(k) ? std::optional<std::size_t>(6) : std::nullopt;
      std::vector<kernel::KernelInput> inputs;
      for (int i = 0; i < 25; ++i) inputs.push_back(kernel::random_input(k, rng, limbs));
      const auto trace = simulate(m, inputs);
      EXPECT_EQ(trace.total_cycles, stream_throughput(m, inputs.size(), {limbs.value_or(0)}))
          << kernel::to_string(k) << "/" << to_string(v);
    }
  }
}

TEST(Throughput, MixedShapesMatchStreamCycles) {
  DeterministicRng rng(12);
  for (auto k : {KernelId::zint_add_scaled_mul_small, KernelId::zint_mod_small_unsigned}) {
    for (auto v : kVariants) {
      const auto& m = model(k, v);
      std::vector<kernel::KernelInput> inputs;
      std::vector<OperandShape> shapes;
      for (std::size_t limbs : {3u, 9u, 1u, 17u, 4u, 4u, 30u}) {
        inputs.push_back(kernel::random_input(k, rng, limbs));
        shapes.push_back(shape_of(inputs.back()));
      }
      // Oracle: accept times accumulate the previous input's interval; a lone input takes its latency.
      std::uint64_t accept = 0, expected = 0;
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (i > 0) accept += initiation_interval(m, shapes[i - 1]);
        expected = std::max(expected, accept + latency(m, shapes[i]));
      }
      EXPECT_EQ(stream_cycles(m, shapes), expected);
      EXPECT_EQ(simulate(m, inputs).total_cycles, expected) << kernel::to_string(k) << "/" << to_string(v);
    }
  }
  EXPECT_THROW(stream_cycles(model(KernelId::modp_add, Variant::sequential), {}), UsageError);
}

// ---- functional equivalence ------------------------------------------------

TEST(Simulate, SingleMontyMulDeep) {
  const auto q = kernel::ModpParams::make(2147473409u);
  const kernel::KernelInput in = kernel::MontyMulInput{123456789u, 987654321u, q};
  const auto trace = simulate(model(KernelId::modp_montymul, Variant::deep_pipelined), {in});
  EXPECT_EQ(trace.total_cycles, 6u);
  ASSERT_EQ(trace.outputs.size(), 1u);
  EXPECT_EQ(trace.outputs[0], kernel::evaluate(in));
  EXPECT_EQ(trace.outputs[0], big_oracle(in));
}

TEST(Simulate, ModAddZeroes) {
  const kernel::KernelInput in = kernel::ModAddInput{0, 0, 2147473409u};
  for (auto v : kVariants) {
    const auto& m = model(KernelId::modp_add, v);
    const auto trace = simulate(m, {in});
    EXPECT_EQ(trace.outputs[0], kernel::KernelOutput(kernel::Word{0}));
    EXPECT_EQ(trace.total_cycles, latency(m, {}));
  }
}

TEST(Simulate, RandomSweepMatchesOracles) {
  for (auto k : kernel::kAllKernels) {
    const auto inputs = kernel::generate_inputs(k, 1000, 2024);
    for (auto v : kVariants) {
      const auto trace = simulate(model(k, v), inputs, false);
      ASSERT_EQ(trace.outputs.size(), inputs.size());
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        ASSERT_EQ(trace.outputs[i], kernel::evaluate(inputs[i]))
            << kernel::to_string(k) << "/" << to_string(v) << " " << kernel::describe(inputs[i]);
        ASSERT_EQ(trace.outputs[i], big_oracle(inputs[i])) << kernel::describe(inputs[i]);
      }
    }
  }
}

TEST(Simulate, ExhaustiveSmallModuli) {
  for (kernel::Word p : {3u, 5u, 7u, 11u, 13u, 31u}) {
    const auto q = kernel::ModpParams::make(p);
    std::vector<kernel::KernelInput> mm, add;
    for (kernel::Word a = 0; a < p; ++a) {
      for (kernel::Word b = 0; b < p; ++b) {
        mm.push_back(kernel::MontyMulInput{a, b, q});
        add.push_back(kernel::ModAddInput{a, b, p});
      }
    }
    for (auto v : kVariants) {
      const auto t1 = simulate(model(KernelId::modp_montymul, v), mm, false);
      const auto t2 = simulate(model(KernelId::modp_add, v), add, false);
      for (std::size_t i = 0; i < mm.size(); ++i) {
        ASSERT_EQ(t1.outputs[i], big_oracle(mm[i])) << kernel::describe(mm[i]);
        ASSERT_EQ(t2.outputs[i], big_oracle(add[i])) << kernel::describe(add[i]);
      }
    }
  }
}

TEST(Simulate, ReferenceShapeResults) {
  DeterministicRng rng(5);
  for (auto k : {KernelId::zint_add_scaled_mul_small, KernelId::zint_mod_small_unsigned}) {
    for (auto v : kVariants) {
      const auto& m = model(k, v);
      const auto in = kernel::random_input(k, rng, m.reference_limbs);
      const auto trace = simulate(m, {in});
      EXPECT_EQ(trace.outputs[0], big_oracle(in));
      EXPECT_EQ(trace.total_cycles, latency(m, m.reference_shape()));
    }
  }
}

TEST(Simulate, PreconditionViolationsPropagate) {
  const auto& m = model(KernelId::modp_add, Variant::deep_pipelined);
  EXPECT_THROW(simulate(m, {kernel::ModAddInput{7, 1, 7}}), DataError);
  EXPECT_THROW(simulate(m, {kernel::ModAddInput{1, 1, 8}}), DataError);
  const auto& mm = model(KernelId::modp_montymul, Variant::deep_pipelined);
  EXPECT_THROW(simulate(mm, {kernel::ModAddInput{1, 1, 7}}), UsageError);
  const auto& ms = model(KernelId::zint_mod_small_unsigned, Variant::deep_pipelined);
  EXPECT_THROW(simulate(ms, {kernel::ModSmallInput{
                                kernel::LimbVector({1}, kernel::Signedness::Unsigned),
                                kernel::ModpParams::make(7)}}),
               DataError);
}

// ---- trace -----------------------------------------------------------------

TEST(Trace, EventsAreConsistent) {
  const auto inputs = kernel::generate_inputs(KernelId::modp_montymul, 20, 9);
  for (auto v : kVariants) {
    const auto& m = model(KernelId::modp_montymul, v);
    const auto trace = simulate(m, inputs);
    EXPECT_EQ(trace.count(EventKind::accept), inputs.size());
    EXPECT_EQ(trace.count(EventKind::valid), inputs.size());
    EXPECT_EQ(trace.count(EventKind::advance), inputs.size() * (latency(m, {}) - 1));
    // Each input is valid exactly latency-1 edges after its accepting edge.
    std::vector<std::uint64_t> accepted(inputs.size());
    for (const auto& e : trace.events) {
      if (e.kind == EventKind::accept) accepted[e.input] = e.cycle;
      if (e.kind == EventKind::valid) EXPECT_EQ(e.cycle - accepted[e.input] + 1, latency(m, {}));
    }
  }
}

TEST(Trace, ExportIsLineOriented) {
  const auto trace = simulate(model(KernelId::modp_add, Variant::deep_pipelined),
                              {kernel::ModAddInput{1, 2, 7}});
  EXPECT_EQ(export_trace(trace),
            "1 accept input=0 stage=1\n"
            "2 advance input=0 stage=2\n"
            "3 advance input=0 stage=3\n"
            "3 valid input=0 stage=3\n"
            "total_cycles 3\n");
}

TEST(Pipeline, SynchronousResetClearsStages) {
  Pipeline pipe(model(KernelId::modp_montymul, Variant::deep_pipelined));
  const kernel::KernelInput a = kernel::MontyMulInput{3, 5, kernel::ModpParams::make(7)};
  pipe.clock(&a);
  pipe.clock(&a);
  EXPECT_TRUE(pipe.busy());
  pipe.reset();
  EXPECT_FALSE(pipe.ready());
  EXPECT_TRUE(pipe.clock().empty());
  EXPECT_FALSE(pipe.busy());
  // Nothing in flight before reset ever becomes valid.
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(pipe.clock().empty());
  ASSERT_TRUE(pipe.ready());
  pipe.clock(&a);
  std::size_t valid = 0;
  for (int i = 0; i < 10; ++i) {
    for (const auto& c : pipe.clock()) {
      EXPECT_EQ(c.result, kernel::KernelOutput(kernel::Word{4}));
      ++valid;
    }
  }
  EXPECT_EQ(valid, 1u);
}

TEST(Pipeline, RejectsStartWhenBusy) {
  Pipeline pipe(model(KernelId::modp_montymul, Variant::sequential));
  const kernel::KernelInput a = kernel::MontyMulInput{3, 5, kernel::ModpParams::make(7)};
  pipe.clock(&a);
  EXPECT_FALSE(pipe.ready());
  EXPECT_THROW(pipe.clock(&a), UsageError);
}

// ---- fixed latency ---------------------------------------------------------

TEST(FixedLatency, ShippedModelsPass) {
  for (auto k : kernel::kAllKernels) {
    for (auto v : kVariants) {
      const auto verdict = check_fixed_latency(model(k, v), 200, 17);
      EXPECT_TRUE(verdict.passed) << verdict.text;
      ASSERT_EQ(verdict.distinct_cycles.size(), 1u);
      const auto& m = model(k, v);
      EXPECT_EQ(verdict.distinct_cycles[0], latency(m, m.reference_shape()));
    }
  }
}

TEST(FixedLatency, MontyMulThousandTrials) {
  const auto verdict = check_fixed_latency(model(KernelId::modp_montymul, Variant::deep_pipelined), 1000, 1);
  EXPECT_TRUE(verdict.passed);
  EXPECT_EQ(verdict.distinct_cycles, std::vector<std::uint64_t>{6});
}

TEST(FixedLatency, ModSmallAtFixedLengthIgnoresValuesAndModulus) {
  for (std::size_t dlen : {1u, 5u, 28u}) {
    EXPECT_TRUE(check_fixed_latency(model(KernelId::zint_mod_small_unsigned, Variant::sequential), 100,
                                    dlen, OperandShape{dlen})
                    .passed);
  }
}

TEST(FixedLatency, DataDependentMutantFails) {
  for (auto k : kernel::kAllKernels) {
    KernelModel mutant = model(k, Variant::deep_pipelined);
    mutant.data_dependent_mutant = true;
    const auto verdict = check_fixed_latency(mutant, 200, 3);
    EXPECT_FALSE(verdict.passed) << kernel::to_string(k);
    EXPECT_EQ(verdict.distinct_cycles.size(), 2u);
  }
}

TEST(FixedLatency, NeedsTwoTrials) {
  EXPECT_THROW(check_fixed_latency(model(KernelId::modp_add, Variant::sequential), 1, 0), UsageError);
}
