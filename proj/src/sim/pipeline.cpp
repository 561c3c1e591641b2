#include "pqc/sim/pipeline.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/llm/assets.hpp"

namespace pqc::sim {

using kernel::kLimbMask;
using kernel::Word;

std::string_view to_string(Variant v) {
  return v == Variant::deep_pipelined ? "deep_pipelined" : "sequential";
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "deep_pipelined" || text == "deep" || text == "llm") return Variant::deep_pipelined;
  if (text == "sequential" || text == "hls") return Variant::sequential;
  return std::nullopt;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::accept:
      return "accept";
    case EventKind::advance:
      return "advance";
    case EventKind::valid:
      return "valid";
    case EventKind::reset:
      return "reset";
  }
  return "unknown";
}

OperandShape shape_of(const KernelInput& input) { return {kernel::operand_limbs(input)}; }

void validate(const KernelModel& m) {
  const auto name = fmt::format("{}/{}", kernel::to_string(m.kernel), to_string(m.variant));
  if (m.latency_base < 1) throw DataError(name + ": latency_base must be at least 1");
  if (m.initiation_interval && *m.initiation_interval < 1) {
    throw DataError(name + ": initiation_interval must be at least 1");
  }
  const bool limb = kernel::is_limb_kernel(m.kernel);
  if (!limb && m.per_limb_cycles != 0) {
    throw DataError(name + ": scalar kernels have no per-limb cycles");
  }
  if (!limb && m.variant == Variant::deep_pipelined && m.initiation_interval != 1u) {
    throw DataError(name + ": deep-pipelined scalar models accept one input per cycle");
  }
  if (limb && m.reference_limbs && *m.reference_limbs == 0) {
    throw DataError(name + ": reference shape needs at least one limb");
  }
}

std::uint64_t latency(const KernelModel& m, OperandShape shape) {
  if (!kernel::is_limb_kernel(m.kernel)) return m.latency_base;
  if (shape.limbs == 0) {
    throw DataError(fmt::format("{} needs an operand shape with at least one limb",
                                kernel::to_string(m.kernel)));
  }
  return m.latency_base + static_cast<std::uint64_t>(m.per_limb_cycles) * shape.limbs;
}

std::uint64_t initiation_interval(const KernelModel& m, OperandShape shape) {
  const std::uint64_t lat = latency(m, shape);
  if (!m.initiation_interval) return lat;
  const std::uint64_t occupancy =
      kernel::is_limb_kernel(m.kernel) ? static_cast<std::uint64_t>(m.per_limb_cycles) * shape.limbs : 0;
  return std::max<std::uint64_t>(*m.initiation_interval, occupancy);
}

std::uint64_t stream_throughput(const KernelModel& m, std::size_t n, OperandShape shape) {
  if (n == 0) throw UsageError("stream needs at least one input");
  return latency(m, shape) + (n - 1) * initiation_interval(m, shape);
}

std::uint64_t stream_cycles(const KernelModel& m, const std::vector<OperandShape>& shapes) {
  if (shapes.empty()) throw UsageError("stream needs at least one input");
  std::uint64_t accept = 1, total = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (i > 0) accept += initiation_interval(m, shapes[i - 1]);
    total = std::max(total, accept + latency(m, shapes[i]) - 1);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Calibration

const KernelModel& Calibration::find(KernelId k, Variant v) const {
  for (const auto& m : models) {
    if (m.kernel == k && m.variant == v) return m;
  }
  throw DataError(fmt::format("calibration has no model for {}/{}", kernel::to_string(k),
                              to_string(v)));
}

Calibration parse_calibration(std::string_view text) {
  const Json data = open_envelope(parse_interchange(text), "calibration");
  Calibration c;
  std::set<std::pair<KernelId, Variant>> seen;
  try {
    c.note = data.value("note", "");
    for (const auto& j : data.at("models")) {
      KernelModel m;
      const auto kname = j.at("kernel").get<std::string>();
      const auto k = kernel::parse_kernel_id(kname);
      if (!k) throw DataError("calibration: unknown kernel " + kname);
      const auto vname = j.at("variant").get<std::string>();
      const auto v = parse_variant(vname);
      if (!v) throw DataError("calibration: unknown variant " + vname);
      m.kernel = *k;
      m.variant = *v;
      m.latency_base = j.at("latency_base").get<std::uint32_t>();
      m.per_limb_cycles = j.at("per_limb_cycles").get<std::uint32_t>();
      const auto& ii = j.at("initiation_interval");
      if (ii.is_string()) {
        if (ii.get<std::string>() != "latency") {
          throw DataError("calibration: initiation_interval must be a number or \"latency\"");
        }
      } else {
        m.initiation_interval = ii.get<std::uint32_t>();
      }
      if (!j.at("reference_limbs").is_null()) m.reference_limbs = j.at("reference_limbs").get<std::size_t>();
      validate(m);
      if (!seen.insert({m.kernel, m.variant}).second) {
        throw DataError(fmt::format("calibration: duplicate model {}/{}", kname, vname));
      }
      c.models.push_back(m);
    }
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed calibration: ") + ex.what());
  }
  return c;
}

Calibration load_calibration(const std::filesystem::path& file) {
  return parse_calibration(read_file(file));
}

const Calibration& reference_calibration() {
  static const Calibration c = [] {
    const auto text = llm::embedded_asset("calibration/reference_models.json");
    if (!text) throw DataError("built-in calibration is missing");
    return parse_calibration(*text);
  }();
  return c;
}

std::string format_calibration(const Calibration& c) {
  Json data;
  data["note"] = c.note;
  data["models"] = Json::array();
  for (const auto& m : c.models) {
    data["models"].push_back(
        {{"kernel", kernel::to_string(m.kernel)},
         {"variant", to_string(m.variant)},
         {"latency_base", m.latency_base},
         {"per_limb_cycles", m.per_limb_cycles},
         {"initiation_interval", m.initiation_interval ? Json(*m.initiation_interval) : Json("latency")},
         {"reference_limbs", m.reference_limbs ? Json(*m.reference_limbs) : Json()}});
  }
  return dump_interchange(make_envelope("calibration", data));
}

// ---------------------------------------------------------------------------
// Datapath

namespace {

enum class OpCode {
  mm_mul, mm_low, mm_mul_p, mm_shift, mm_sub, mm_correct,
  add_sum, add_correct,
  as_init, as_limb, as_done,
  ms_init, ms_scale, ms_accumulate, ms_done,
};

struct Op {
  OpCode code;
  std::size_t limb = 0;
};

struct Registers {
  std::uint64_t z = 0;
  std::uint64_t w = 0;
  Word acc = 0;
  Word ysign = 0;
  Word tw = 0;
  std::int32_t cc = 0;
  std::vector<Word> x;
  KernelOutput out{Word{0}};
};

void check_input(const KernelModel& m, const KernelInput& input) {
  if (kernel::kernel_of(input) != m.kernel) {
    throw UsageError(fmt::format("{} model cannot run a {} input", kernel::to_string(m.kernel),
                                 kernel::to_string(kernel::kernel_of(input))));
  }
  std::visit(
      [](const auto& in) {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, kernel::MontyMulInput>) {
          kernel::detail::check_modulus(in.params.p);
          kernel::detail::check_operand(in.a, in.params.p, "a");
          kernel::detail::check_operand(in.b, in.params.p, "b");
          if (in.params.p0i != kernel::modp_ninv31(in.params.p)) {
            throw DataError("p0i does not match the modulus");
          }
        } else if constexpr (std::is_same_v<T, kernel::ModAddInput>) {
          kernel::detail::check_modulus(in.p);
          kernel::detail::check_operand(in.a, in.p, "a");
          kernel::detail::check_operand(in.b, in.p, "b");
        } else if constexpr (std::is_same_v<T, kernel::AddScaledInput>) {
          if (in.y.size() > in.x.size()) throw DataError("ylen exceeds xlen");
          if (in.scale.scl >= 31) throw DataError("intra-limb shift must be below 31");
        } else {
          kernel::detail::check_modulus(in.params.p);
          if (!in.params.falcon_range) throw DataError("modulus outside 2^30 < p < 2^31");
          if (in.params.p0i != kernel::modp_ninv31(in.params.p) ||
              in.params.r2 != kernel::modp_R2(in.params.p)) {
            throw DataError("p0i or R2 does not match the modulus");
          }
        }
      },
      input);
}

std::vector<Op> program_for(const KernelInput& input) {
  std::vector<Op> ops;
  switch (kernel::kernel_of(input)) {
    case KernelId::modp_montymul:
      ops = {{OpCode::mm_mul}, {OpCode::mm_low}, {OpCode::mm_mul_p},
             {OpCode::mm_shift}, {OpCode::mm_sub}, {OpCode::mm_correct}};
      break;
    case KernelId::modp_add:
      ops = {{OpCode::add_sum}, {OpCode::add_correct}};
      break;
    case KernelId::zint_add_scaled_mul_small: {
      // Every limb slot of x is visited so timing does not depend on sch.
      const auto& in = std::get<kernel::AddScaledInput>(input);
      ops.push_back({OpCode::as_init});
      for (std::size_t u = 0; u < in.x.size(); ++u) ops.push_back({OpCode::as_limb, u});
      ops.push_back({OpCode::as_done});
      break;
    }
    case KernelId::zint_mod_small_unsigned: {
      const auto& in = std::get<kernel::ModSmallInput>(input);
      ops.push_back({OpCode::ms_init});
      for (std::size_t u = in.d.size(); u-- > 0;) {
        ops.push_back({OpCode::ms_scale, u});
        ops.push_back({OpCode::ms_accumulate, u});
      }
      ops.push_back({OpCode::ms_done});
      break;
    }
  }
  return ops;
}

void execute(const Op& op, const KernelInput& input, Registers& r) {
  switch (op.code) {
    case OpCode::mm_mul: {
      const auto& in = std::get<kernel::MontyMulInput>(input);
      r.z = static_cast<std::uint64_t>(in.a) * in.b;
      return;
    }
    case OpCode::mm_low: {
      const auto& in = std::get<kernel::MontyMulInput>(input);
      r.w = ((r.z * in.params.p0i) & kLimbMask);
      return;
    }
    case OpCode::mm_mul_p:
      r.w *= std::get<kernel::MontyMulInput>(input).params.p;
      return;
    case OpCode::mm_shift:
      r.acc = static_cast<Word>((r.z + r.w) >> 31);
      return;
    case OpCode::mm_sub:
      r.acc -= std::get<kernel::MontyMulInput>(input).params.p;
      return;
    case OpCode::mm_correct: {
      const Word p = std::get<kernel::MontyMulInput>(input).params.p;
      r.acc += p & -(r.acc >> 31);
      r.out = r.acc;
      return;
    }
    case OpCode::add_sum: {
      const auto& in = std::get<kernel::ModAddInput>(input);
      r.acc = in.a + in.b - in.p;
      return;
    }
    case OpCode::add_correct: {
      const Word p = std::get<kernel::ModAddInput>(input).p;
      r.acc += p & -(r.acc >> 31);
      r.out = r.acc;
      return;
    }
    case OpCode::as_init: {
      const auto& in = std::get<kernel::AddScaledInput>(input);
      r.x.assign(in.x.limbs().begin(), in.x.limbs().end());
      r.ysign = -(in.y[in.y.size() - 1] >> 30) >> 1;
      r.tw = 0;
      r.cc = 0;
      return;
    }
    case OpCode::as_limb: {
      const auto& in = std::get<kernel::AddScaledInput>(input);
      const std::size_t u = op.limb;
      if (u < in.scale.sch) return;  // slot below the word shift passes through
      const std::size_t v = u - in.scale.sch;
      const Word scl = in.scale.scl;
      const Word wy = v < in.y.size() ? in.y[v] : r.ysign;
      const Word wys = ((wy << scl) & kLimbMask) | r.tw;
      r.tw = scl == 0 ? 0 : wy >> (31 - scl);
      const std::int64_t z = static_cast<std::int64_t>(wys) * in.k + r.x[u] + r.cc;
      r.x[u] = static_cast<Word>(z) & kLimbMask;
      r.cc = static_cast<std::int32_t>(z >> 31);
      return;
    }
    case OpCode::as_done:
      r.out = kernel::LimbVector(r.x, kernel::Signedness::Signed);
      return;
    case OpCode::ms_init:
      r.acc = 0;
      return;
    case OpCode::ms_scale: {
      const auto& q = std::get<kernel::ModSmallInput>(input).params;
      r.acc = kernel::detail::montymul_unchecked(r.acc, q.r2, q.p, q.p0i);
      return;
    }
    case OpCode::ms_accumulate: {
      const auto& in = std::get<kernel::ModSmallInput>(input);
      const Word p = in.params.p;
      Word w = in.d[op.limb] - p;
      w += p & -(w >> 31);
      r.acc = kernel::detail::add_unchecked(r.acc, w, p);
      return;
    }
    case OpCode::ms_done:
      r.out = r.acc;
      return;
  }
}

bool first_operand_odd(const KernelInput& input) {
  return std::visit(
      [](const auto& in) -> bool {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, kernel::AddScaledInput>) return in.x[0] & 1u;
        else if constexpr (std::is_same_v<T, kernel::ModSmallInput>) return in.d[0] & 1u;
        else return in.a & 1u;
      },
      input);
}

}  // namespace

// ---------------------------------------------------------------------------
// Pipeline

struct Pipeline::Item {
  std::size_t index;
  KernelInput input;
  std::vector<Op> ops;
  std::uint64_t latency;
  std::uint64_t stages_done = 0;
  Registers regs;

  // Stage s runs ops [s*m/L, (s+1)*m/L): spread thin when stages outnumber
  // ops, chained when they do not.
  void run_stage() {
    const std::uint64_t m = ops.size();
    const std::uint64_t s = stages_done;
    for (std::uint64_t i = s * m / latency; i < (s + 1) * m / latency; ++i) {
      execute(ops[i], input, regs);
    }
    ++stages_done;
  }
};

Pipeline::Pipeline(KernelModel model, bool record_advances)
    : model_(std::move(model)), record_advances_(record_advances) {
  validate(model_);
}
Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;
Pipeline& Pipeline::operator=(Pipeline&&) noexcept = default;

void Pipeline::reset() { reset_pending_ = true; }

bool Pipeline::ready() const { return !reset_pending_ && cycle_ + 1 >= next_accept_; }

std::vector<Pipeline::Completion> Pipeline::clock(const KernelInput* start) {
  ++cycle_;
  std::vector<Completion> done;
  if (reset_pending_) {
    if (start) throw UsageError("start asserted during reset");
    in_flight_.clear();
    reset_pending_ = false;
    next_accept_ = cycle_ + 1;
    events_.push_back({cycle_, EventKind::reset, 0, 0});
    return done;
  }

  auto finish = [&](Item& item) {
    events_.push_back({cycle_, EventKind::valid, item.index, static_cast<std::uint32_t>(item.latency)});
    done.push_back({item.index, std::move(item.regs.out)});
  };

  for (auto& item : in_flight_) {
    item.run_stage();
    if (record_advances_) {
      events_.push_back({cycle_, EventKind::advance, item.index,
                         static_cast<std::uint32_t>(item.stages_done)});
    }
    if (item.stages_done == item.latency) finish(item);
  }
  std::erase_if(in_flight_, [](const Item& i) { return i.stages_done == i.latency; });

  if (start) {
    if (cycle_ < next_accept_) {
      throw UsageError(fmt::format("input offered at cycle {} before the pipeline is ready", cycle_));
    }
    check_input(model_, *start);
    const OperandShape shape = shape_of(*start);
    std::uint64_t extra = model_.data_dependent_mutant && first_operand_odd(*start) ? 1 : 0;
    Item item{accepted_++, *start, program_for(*start), latency(model_, shape) + extra, 0, {}};
    next_accept_ = cycle_ + initiation_interval(model_, shape) + (model_.initiation_interval ? 0 : extra);
    events_.push_back({cycle_, EventKind::accept, item.index, 1});
    item.run_stage();
    if (item.stages_done == item.latency) {
      finish(item);
    } else {
      in_flight_.push_back(std::move(item));
    }
  }
  return done;
}

std::size_t SimTrace::count(EventKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

std::string export_trace(const SimTrace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += fmt::format("{} {} input={} stage={}\n", e.cycle, to_string(e.kind), e.input, e.stage);
  }
  out += fmt::format("total_cycles {}\n", trace.total_cycles);
  return out;
}

SimTrace simulate(const KernelModel& model, const std::vector<KernelInput>& inputs,
                  bool record_advances) {
  if (inputs.empty()) throw UsageError("simulation needs at least one input");
  Pipeline pipe(model, record_advances);
  std::vector<std::optional<KernelOutput>> results(inputs.size());
  std::size_t next = 0, completed = 0;
  while (completed < inputs.size()) {
    const KernelInput* start = next < inputs.size() && pipe.ready() ? &inputs[next] : nullptr;
    if (start) ++next;
    for (auto& c : pipe.clock(start)) {
      results[c.input] = std::move(c.result);
      ++completed;
    }
  }
  SimTrace trace;
  trace.total_cycles = pipe.cycle();
  trace.events = pipe.events();
  for (auto& r : results) trace.outputs.push_back(std::move(*r));
  return trace;
}

FixedLatencyVerdict check_fixed_latency(const KernelModel& model, std::size_t trials,
                                        std::uint64_t seed, std::optional<OperandShape> shape) {
  if (trials < 2) throw UsageError("fixed-latency check needs at least two trials");
  const bool limb = kernel::is_limb_kernel(model.kernel);
  OperandShape s = shape.value_or(model.reference_shape());
  if (limb && s.limbs == 0) s.limbs = 8;
  DeterministicRng rng(seed);
  std::set<std::uint64_t> cycles;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto input = kernel::random_input(model.kernel, rng,
                                            limb ? std::optional<std::size_t>(s.limbs) : std::nullopt);
    cycles.insert(simulate(model, {input}, false).total_cycles);
  }
  FixedLatencyVerdict v;
  v.trials = trials;
  v.distinct_cycles.assign(cycles.begin(), cycles.end());
  v.passed = cycles.size() == 1;
  v.text = v.passed
               ? fmt::format("{}/{}: {} trials, constant {} cycles", kernel::to_string(model.kernel),
                             to_string(model.variant), trials, *cycles.begin())
               : fmt::format("{}/{}: {} trials, cycle counts vary: {}", kernel::to_string(model.kernel),
                             to_string(model.variant), trials, fmt::join(cycles, ", "));
  return v;
}

}  // namespace pqc::sim
