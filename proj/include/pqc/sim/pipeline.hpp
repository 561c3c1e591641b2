#pragma once

// Stage-level behavioral models of the two accelerator styles per kernel.
// Results come from a registered datapath that follows the reference
// kernels step by step; cycle counts come from calibrated models.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqc/common/interchange.hpp"
#include "pqc/kernel/kernel_io.hpp"

namespace pqc::sim {

using kernel::KernelId;
using kernel::KernelInput;
using kernel::KernelOutput;

enum class Variant { deep_pipelined, sequential };
std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view text);

/// Limb count driving the cost of a limb kernel (xlen or dlen). Scalar
/// kernels use 0.
struct OperandShape {
  std::size_t limbs = 0;
  friend bool operator==(const OperandShape&, const OperandShape&) = default;
};

OperandShape shape_of(const KernelInput& input);

struct KernelModel {
  KernelId kernel = KernelId::modp_montymul;
  Variant variant = Variant::deep_pipelined;
  std::uint32_t latency_base = 1;
  std::uint32_t per_limb_cycles = 0;
  std::optional<std::uint32_t> initiation_interval;  // empty: equal to the latency
  std::optional<std::size_t> reference_limbs;        // shape behind the calibration
  // Negative control: adds a cycle whenever the first operand is odd.
  bool data_dependent_mutant = false;

  OperandShape reference_shape() const { return {reference_limbs.value_or(0)}; }
  friend bool operator==(const KernelModel&, const KernelModel&) = default;
};

/// Throws DataError when the model breaks its invariants.
void validate(const KernelModel& model);

/// latency_base + per_limb_cycles * limbs. Limb kernels need limbs >= 1.
std::uint64_t latency(const KernelModel& model, OperandShape shape);

/// Cycles between accepted inputs of the given shape: the configured
/// interval, but never shorter than the per-limb occupancy of the datapath.
std::uint64_t initiation_interval(const KernelModel& model, OperandShape shape);

/// latency + (n - 1) * interval. n = 0 throws UsageError.
std::uint64_t stream_throughput(const KernelModel& model, std::size_t n_inputs,
                                OperandShape shape = {});

/// Cycles to stream inputs of the given shapes back to back: each input is
/// accepted one interval (of the previous shape) after the one before it.
/// Equals stream_throughput when every shape is the same.
std::uint64_t stream_cycles(const KernelModel& model, const std::vector<OperandShape>& shapes);

// ---- calibration -----------------------------------------------------------

struct Calibration {
  std::string note;
  std::vector<KernelModel> models;

  const KernelModel& find(KernelId kernel, Variant variant) const;
};

/// The shipped models, compiled in from assets/calibration.
const Calibration& reference_calibration();
Calibration parse_calibration(std::string_view text);
Calibration load_calibration(const std::filesystem::path& file);
std::string format_calibration(const Calibration& calibration);

// ---- cycle-level simulation --------------------------------------------------

enum class EventKind { accept, advance, valid, reset };
std::string_view to_string(EventKind kind);

struct TraceEvent {
  std::uint64_t cycle = 0;
  EventKind kind = EventKind::accept;
  std::size_t input = 0;  // index of the input the event belongs to
  std::uint32_t stage = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimTrace {
  std::vector<TraceEvent> events;
  std::uint64_t total_cycles = 0;
  std::vector<KernelOutput> outputs;  // in input order

  std::size_t count(EventKind kind) const;
};

/// Line-oriented event log: "<cycle> <event> input=<i> stage=<s>".
std::string export_trace(const SimTrace& trace);

/// One accelerator instance. Each clock() is one rising edge; an input
/// offered with start is accepted when ready() and its result is valid
/// latency() edges later, counting the accepting edge.
class Pipeline {
 public:
  explicit Pipeline(KernelModel model, bool record_advances = true);
  ~Pipeline();
  Pipeline(Pipeline&&) noexcept;
  Pipeline& operator=(Pipeline&&) noexcept;

  /// Synchronous reset: drops every in-flight input on the next edge.
  void reset();
  bool ready() const;
  std::uint64_t cycle() const { return cycle_; }
  bool busy() const { return !in_flight_.empty(); }

  struct Completion {
    std::size_t input;
    KernelOutput result;
  };

  /// Advances one edge. Returns the inputs whose results became valid.
  /// `start` must only be given when ready(); its index is the accept order.
  std::vector<Completion> clock(const KernelInput* start = nullptr);

  const std::vector<TraceEvent>& events() const { return events_; }

 private:
  struct Item;
  void accept(const KernelInput& input);

  KernelModel model_;
  bool record_advances_;
  bool reset_pending_ = false;
  std::uint64_t cycle_ = 0;
  std::uint64_t next_accept_ = 1;
  std::size_t accepted_ = 0;
  std::vector<Item> in_flight_;
  std::vector<TraceEvent> events_;
};

/// Streams the inputs back to back through one pipeline.
SimTrace simulate(const KernelModel& model, const std::vector<KernelInput>& inputs,
                  bool record_advances = true);

struct FixedLatencyVerdict {
  bool passed = false;
  std::size_t trials = 0;
  std::vector<std::uint64_t> distinct_cycles;  // sorted
  std::string text;
};

/// Simulates `trials` random inputs of one shape (the model's reference
/// shape for limb kernels) and passes iff every one takes the same number of
/// cycles. trials < 2 throws UsageError.
FixedLatencyVerdict check_fixed_latency(const KernelModel& model, std::size_t trials,
                                        std::uint64_t seed,
                                        std::optional<OperandShape> shape = std::nullopt);

}  // namespace pqc::sim
