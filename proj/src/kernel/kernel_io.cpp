#include "pqc/kernel/kernel_io.hpp"

#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "pqc/common/error.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/kernel/zint.hpp"

namespace pqc::kernel {

std::string_view to_string(KernelId id) {
  switch (id) {
    case KernelId::modp_montymul:
      return "modp_montymul";
    case KernelId::modp_add:
      return "modp_add";
    case KernelId::zint_add_scaled_mul_small:
      return "zint_add_scaled_mul_small";
    case KernelId::zint_mod_small_unsigned:
      return "zint_mod_small_unsigned";
  }
  return "unknown";
}

std::optional<KernelId> parse_kernel_id(std::string_view name) {
  for (KernelId id : kAllKernels) {
    if (to_string(id) == name) {
      return id;
    }
  }
  return std::nullopt;
}

bool is_limb_kernel(KernelId id) {
  return id == KernelId::zint_add_scaled_mul_small || id == KernelId::zint_mod_small_unsigned;
}

KernelId kernel_of(const KernelInput& input) {
  switch (input.index()) {
    case 0:
      return KernelId::modp_montymul;
    case 1:
      return KernelId::modp_add;
    case 2:
      return KernelId::zint_add_scaled_mul_small;
    default:
      return KernelId::zint_mod_small_unsigned;
  }
}

std::size_t operand_limbs(const KernelInput& input) {
  if (const auto* in = std::get_if<AddScaledInput>(&input)) {
    return in->x.size();
  }
  if (const auto* in = std::get_if<ModSmallInput>(&input)) {
    return in->d.size();
  }
  return 0;
}

KernelOutput evaluate(const KernelInput& input) {
  struct Visitor {
    KernelOutput operator()(const MontyMulInput& in) const {
      return modp_montymul(in.a, in.b, in.params);
    }
    KernelOutput operator()(const ModAddInput& in) const { return modp_add(in.a, in.b, in.p); }
    KernelOutput operator()(const AddScaledInput& in) const {
      return zint_add_scaled_mul_small(in.x, in.y, in.k, in.scale);
    }
    KernelOutput operator()(const ModSmallInput& in) const {
      return zint_mod_small_unsigned(in.d, in.params);
    }
  };
  return std::visit(Visitor{}, input);
}

namespace {

void append_hex(std::string& out, std::uint64_t v) {
  if (!out.empty()) {
    out.push_back(' ');
  }
  out += fmt::format("{:x}", v);
}

void append_limbs(std::string& out, const LimbVector& x) {
  for (Word w : x.limbs()) {
    append_hex(out, w);
  }
}

std::string limbs_text(const LimbVector& x) {
  std::string s = "[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += (i ? "," : "") + fmt::format("{:x}", x[i]);
  }
  return s + "]";
}

}  // namespace

std::string describe(const KernelInput& input) {
  struct Visitor {
    std::string operator()(const MontyMulInput& in) const {
      return fmt::format("a={:x} b={:x} p={:x}", in.a, in.b, in.params.p);
    }
    std::string operator()(const ModAddInput& in) const {
      return fmt::format("a={:x} b={:x} p={:x}", in.a, in.b, in.p);
    }
    std::string operator()(const AddScaledInput& in) const {
      return fmt::format("x={} y={} k={} sch={} scl={}", limbs_text(in.x), limbs_text(in.y), in.k,
                         in.scale.sch, in.scale.scl);
    }
    std::string operator()(const ModSmallInput& in) const {
      return fmt::format("d={} p={:x}", limbs_text(in.d), in.params.p);
    }
  };
  return std::visit(Visitor{}, input);
}

std::string describe(const KernelOutput& output) {
  if (const auto* w = std::get_if<Word>(&output)) {
    return fmt::format("{:x}", *w);
  }
  return limbs_text(std::get<LimbVector>(output));
}

// ---------------------------------------------------------------------------
// Vector generation

namespace {

// First prime of the FALCON small-prime table; used for the fixed edge cases.
constexpr Word kEdgePrime = 2147473409u;

Word random_falcon_modulus(DeterministicRng& rng) {
  return static_cast<Word>(rng.between(Word{1} << 30, kLimbMask)) | 1u;
}

LimbVector random_limbs(DeterministicRng& rng, std::size_t len, Signedness s) {
  std::vector<Word> limbs(len);
  for (auto& w : limbs) {
    // Bias a quarter of the limbs to the extremes to reach carry corners.
    switch (rng.below(8)) {
      case 0:
        w = 0;
        break;
      case 1:
        w = kLimbMask;
        break;
      default:
        w = rng.word31();
    }
  }
  return LimbVector(std::move(limbs), s);
}

LimbVector all_ones(std::size_t len, Signedness s) {
  return LimbVector(std::vector<Word>(len, kLimbMask), s);
}

std::vector<KernelInput> edge_inputs(KernelId kernel) {
  std::vector<KernelInput> v;
  switch (kernel) {
    case KernelId::modp_montymul: {
      const ModpParams q = ModpParams::make(kEdgePrime);
      const ModpParams top = ModpParams::make(kLimbMask);
      v.push_back(MontyMulInput{0, 0, q});
      v.push_back(MontyMulInput{0, q.p - 1, q});
      v.push_back(MontyMulInput{q.p - 1, q.p - 1, q});
      v.push_back(MontyMulInput{1, 1, q});
      v.push_back(MontyMulInput{1, q.r2, q});
      v.push_back(MontyMulInput{top.p - 1, top.p - 1, top});
      v.push_back(MontyMulInput{2, 2, ModpParams::make(3)});
      break;
    }
    case KernelId::modp_add: {
      const Word p = kEdgePrime;
      v.push_back(ModAddInput{p - 1, 1, p});
      v.push_back(ModAddInput{0, 0, p});
      v.push_back(ModAddInput{p - 1, p - 1, p});
      v.push_back(ModAddInput{0, p - 1, p});
      v.push_back(ModAddInput{kLimbMask - 1, kLimbMask - 1, kLimbMask});
      break;
    }
    case KernelId::zint_add_scaled_mul_small: {
      const auto S = Signedness::Signed;
      v.push_back(AddScaledInput{LimbVector::zeros(3, S), LimbVector({1}, S), 1, {1, 0}});
      v.push_back(AddScaledInput{LimbVector::zeros(4, S), LimbVector::zeros(2, S), 0, {0, 0}});
      v.push_back(AddScaledInput{all_ones(4, S), all_ones(4, S), INT32_MIN, {0, 0}});
      v.push_back(AddScaledInput{all_ones(4, S), all_ones(2, S), INT32_MAX, {1, 30}});
      // Largest positive x plus a large positive product: forces truncation.
      std::vector<Word> maxpos(3, kLimbMask);
      maxpos[2] = kLimbMask >> 1;
      v.push_back(AddScaledInput{LimbVector(maxpos, S), LimbVector(maxpos, S), INT32_MAX, {0, 5}});
      // Shift past the end of x: no effect.
      v.push_back(AddScaledInput{LimbVector({5, 6}, S), LimbVector({7}, S), 9, {2, 0}});
      break;
    }
    case KernelId::zint_mod_small_unsigned: {
      const auto U = Signedness::Unsigned;
      const ModpParams q = ModpParams::make(kEdgePrime);
      v.push_back(ModSmallInput{LimbVector({0}, U), q});
      v.push_back(ModSmallInput{LimbVector({kLimbMask}, U), q});
      v.push_back(ModSmallInput{LimbVector({q.p - 1}, U), q});
      v.push_back(ModSmallInput{all_ones(4, U), q});
      v.push_back(ModSmallInput{all_ones(28, U), ModpParams::make(kLimbMask)});
      v.push_back(ModSmallInput{all_ones(3, U), ModpParams::make((Word{1} << 30) + 1)});
      break;
    }
  }
  return v;
}

}  // namespace

KernelInput random_input(KernelId kernel, DeterministicRng& rng, std::optional<std::size_t> limbs) {
  if (limbs && *limbs == 0) throw DataError("limb count must be at least 1");
  switch (kernel) {
    case KernelId::modp_montymul: {
      const ModpParams q = ModpParams::make(random_falcon_modulus(rng));
      const Word a = static_cast<Word>(rng.below(q.p));
      const Word b = static_cast<Word>(rng.below(q.p));
      return MontyMulInput{a, b, q};
    }
    case KernelId::modp_add: {
      const Word p = random_falcon_modulus(rng);
      const Word a = static_cast<Word>(rng.below(p));
      const Word b = static_cast<Word>(rng.below(p));
      return ModAddInput{a, b, p};
    }
    case KernelId::zint_add_scaled_mul_small: {
      const std::size_t xlen = limbs ? *limbs : rng.between(1, 24);
      const std::size_t ylen = rng.between(1, xlen);
      LimbVector x = random_limbs(rng, xlen, Signedness::Signed);
      LimbVector y = random_limbs(rng, ylen, Signedness::Signed);
      const auto k = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next()));
      const auto sch = static_cast<std::uint32_t>(rng.below(xlen + 1));
      const auto scl = static_cast<std::uint32_t>(rng.below(31));
      return AddScaledInput{std::move(x), std::move(y), k, {sch, scl}};
    }
    case KernelId::zint_mod_small_unsigned: {
      const std::size_t dlen = limbs ? *limbs : rng.between(1, 32);
      LimbVector d = random_limbs(rng, dlen, Signedness::Unsigned);
      return ModSmallInput{std::move(d), ModpParams::make(random_falcon_modulus(rng))};
    }
  }
  throw DataError("unknown kernel");
}

std::size_t edge_vector_count(KernelId kernel) { return edge_inputs(kernel).size(); }

std::vector<KernelInput> generate_inputs(KernelId kernel, std::size_t n, std::uint64_t seed) {
  std::vector<KernelInput> inputs = edge_inputs(kernel);
  DeterministicRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    inputs.push_back(random_input(kernel, rng));
  }
  return inputs;
}

// ---------------------------------------------------------------------------
// Vector file format

std::string format_vector_line(const TestVector& v) {
  std::string line;
  struct Visitor {
    std::string& line;
    void operator()(const MontyMulInput& in) const {
      append_hex(line, in.a);
      append_hex(line, in.b);
      append_hex(line, in.params.p);
      append_hex(line, in.params.p0i);
    }
    void operator()(const ModAddInput& in) const {
      append_hex(line, in.a);
      append_hex(line, in.b);
      append_hex(line, in.p);
    }
    void operator()(const AddScaledInput& in) const {
      append_hex(line, in.x.size());
      append_hex(line, in.y.size());
      append_hex(line, static_cast<std::uint32_t>(in.k));
      append_hex(line, in.scale.sch);
      append_hex(line, in.scale.scl);
      append_limbs(line, in.x);
      append_limbs(line, in.y);
    }
    void operator()(const ModSmallInput& in) const {
      append_hex(line, in.d.size());
      append_hex(line, in.params.p);
      append_hex(line, in.params.p0i);
      append_hex(line, in.params.r2);
      append_limbs(line, in.d);
    }
  };
  std::visit(Visitor{line}, v.input);
  if (const auto* w = std::get_if<Word>(&v.expected)) {
    append_hex(line, *w);
  } else {
    append_limbs(line, std::get<LimbVector>(v.expected));
  }
  return line;
}

std::string format_vector_file(KernelId kernel, const std::vector<TestVector>& vectors,
                               const std::vector<std::string>& header_comments) {
  std::string out = fmt::format("# kernel={}\n", to_string(kernel));
  for (const auto& c : header_comments) {
    out += "# " + c + "\n";
  }
  for (const auto& v : vectors) {
    out += format_vector_line(v);
    out += '\n';
  }
  return out;
}

namespace {

class FieldReader {
 public:
  FieldReader(std::string_view line, std::size_t lineno) : lineno_(lineno) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) fields_.push_back(line.substr(start, i - start));
    }
  }

  std::uint64_t next(const char* what) {
    if (pos_ >= fields_.size()) {
      throw ParseError(lineno_, fmt::format("missing field '{}'", what));
    }
    const std::string_view f = fields_[pos_++];
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v, 16);
    if (ec != std::errc{} || ptr != f.data() + f.size()) {
      throw ParseError(lineno_, fmt::format("field '{}' is not hexadecimal: '{}'", what, f));
    }
    return v;
  }

  Word word(const char* what) {
    const std::uint64_t v = next(what);
    if (v > UINT32_MAX) {
      throw ParseError(lineno_, fmt::format("field '{}' exceeds 32 bits", what));
    }
    return static_cast<Word>(v);
  }

  LimbVector limbs(std::size_t len, Signedness s, const char* what) {
    if (len == 0 || len > (1u << 20)) {
      throw ParseError(lineno_, fmt::format("bad limb count for '{}'", what));
    }
    std::vector<Word> w(len);
    for (auto& x : w) x = word(what);
    try {
      return LimbVector(std::move(w), s);
    } catch (const DataError& e) {
      throw ParseError(lineno_, e.what());
    }
  }

  void finish() const {
    if (pos_ != fields_.size()) {
      throw ParseError(lineno_, fmt::format("{} trailing field(s)", fields_.size() - pos_));
    }
  }

  std::size_t lineno() const { return lineno_; }

 private:
  std::vector<std::string_view> fields_;
  std::size_t pos_ = 0;
  std::size_t lineno_;
};

ModpParams checked_params(Word p, Word p0i, Word r2, std::size_t lineno) {
  ModpParams q;
  try {
    q = ModpParams::make(p);
  } catch (const DataError& e) {
    throw ParseError(lineno, e.what());
  }
  if (q.p0i != p0i || q.r2 != r2) {
    throw ParseError(lineno, "Montgomery constants do not match modulus");
  }
  return q;
}

TestVector parse_line(KernelId kernel, FieldReader& r) {
  TestVector v{ModAddInput{}, Word{0}};
  switch (kernel) {
    case KernelId::modp_montymul: {
      const Word a = r.word("a");
      const Word b = r.word("b");
      const Word p = r.word("p");
      const Word p0i = r.word("p0i");
      ModpParams q;
      try {
        q = ModpParams::make(p);
      } catch (const DataError& e) {
        throw ParseError(r.lineno(), e.what());
      }
      if (q.p0i != p0i) {
        throw ParseError(r.lineno(), "p0i does not match modulus");
      }
      v.input = MontyMulInput{a, b, q};
      v.expected = r.word("out");
      break;
    }
    case KernelId::modp_add: {
      const Word a = r.word("a");
      const Word b = r.word("b");
      const Word p = r.word("p");
      v.input = ModAddInput{a, b, p};
      v.expected = r.word("out");
      break;
    }
    case KernelId::zint_add_scaled_mul_small: {
      const std::size_t xlen = r.next("xlen");
      const std::size_t ylen = r.next("ylen");
      const auto k = static_cast<std::int32_t>(r.word("k"));
      const Word sch = r.word("sch");
      const Word scl = r.word("scl");
      LimbVector x = r.limbs(xlen, Signedness::Signed, "x");
      LimbVector y = r.limbs(ylen, Signedness::Signed, "y");
      v.input = AddScaledInput{std::move(x), std::move(y), k, {sch, scl}};
      v.expected = r.limbs(xlen, Signedness::Signed, "out");
      break;
    }
    case KernelId::zint_mod_small_unsigned: {
      const std::size_t dlen = r.next("dlen");
      const Word p = r.word("p");
      const Word p0i = r.word("p0i");
      const Word r2 = r.word("r2");
      const ModpParams q = checked_params(p, p0i, r2, r.lineno());
      LimbVector d = r.limbs(dlen, Signedness::Unsigned, "d");
      v.input = ModSmallInput{std::move(d), q};
      v.expected = r.word("out");
      break;
    }
  }
  r.finish();
  return v;
}

}  // namespace

VectorFile parse_vector_file(std::string_view text, std::optional<KernelId> kernel) {
  VectorFile file{kernel.value_or(KernelId::modp_montymul), {}};
  bool have_kernel = kernel.has_value();
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line.front() == '#') {
      constexpr std::string_view tag = "kernel=";
      auto body = line.substr(1);
      body.remove_prefix(std::min(body.find_first_not_of(' '), body.size()));
      if (!have_kernel && body.starts_with(tag)) {
        const auto id = parse_kernel_id(body.substr(tag.size()));
        if (!id) {
          throw ParseError(lineno, fmt::format("unknown kernel '{}'", body.substr(tag.size())));
        }
        file.kernel = *id;
        have_kernel = true;
      }
      continue;
    }
    if (!have_kernel) {
      throw ParseError(lineno, "vector line before '# kernel=' header");
    }
    FieldReader reader(line, lineno);
    file.vectors.push_back(parse_line(file.kernel, reader));
  }
  if (!have_kernel) {
    throw DataError("vector file has no '# kernel=' header");
  }
  return file;
}

}  // namespace pqc::kernel
