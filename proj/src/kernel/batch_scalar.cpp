#include "batch_impl.hpp"

namespace pqc::kernel::impl {

void montymul_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p, Word p0i) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = detail::montymul_unchecked(a[i], b[i], p, p0i);
  }
}

void add_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = detail::add_unchecked(a[i], b[i], p);
  }
}

void sub_scalar(const Word* a, const Word* b, Word* out, std::size_t n, Word p) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = detail::sub_unchecked(a[i], b[i], p);
  }
}

}  // namespace pqc::kernel::impl
