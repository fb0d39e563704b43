#include "cvl/kernels.hpp"
#include "scalar_ops.hpp"

namespace cvl::simd {

namespace {

void dif_bcast(u64* x, u64* y, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) scalar::dif(x[i], y[i], w, ws, p);
}

void dit_bcast(u64* x, u64* y, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) scalar::dit(x[i], y[i], w, ws, p);
}

void dif_twiddle(u64* x, u64* y, std::size_t n, const u64* w, const u64* ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) scalar::dif(x[i], y[i], w[i], ws[i], p);
}

void dit_twiddle(u64* x, u64* y, std::size_t n, const u64* w, const u64* ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) scalar::dit(x[i], y[i], w[i], ws[i], p);
}

void mont_mul(u64* x, const u64* y, std::size_t n, u64 p, u64 p_inv) {
  for (std::size_t i = 0; i < n; ++i) x[i] = scalar::mont_mul(x[i], y[i], p, p_inv);
}

void scale_twiddle(u64* x, std::size_t n, const u64* w, const u64* ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) x[i] = scalar::mul_shoup(x[i], w[i], ws[i], p);
}

void scale_bcast(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) x[i] = scalar::mul_shoup(x[i], w, ws, p);
}

void scale_bcast_to(u64* dst, const u64* src, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = scalar::mul_shoup(src[i], w, ws, p);
}

void dif_tail4(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t s = 0; s + 4 <= n; s += 4) scalar::dif_tail4(x + s, w, ws, p);
}

void dit_head4(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  for (std::size_t s = 0; s + 4 <= n; s += 4) scalar::dit_head4(x + s, w, ws, p);
}

void embed(u64* dst, const i64* digits, std::size_t n, u64 p) {
  for (std::size_t i = 0; i < n; ++i) {
    const i64 v = digits[i];
    dst[i] = v < 0 ? p + static_cast<u64>(v) : static_cast<u64>(v);
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::kScalar, "scalar",      dif_bcast,      dit_bcast, dif_twiddle,
                         dit_twiddle,  mont_mul,      scale_twiddle,  scale_bcast, scale_bcast_to,
                         dif_tail4,    dit_head4,     embed};
  return k;
}

}  // namespace cvl::simd
