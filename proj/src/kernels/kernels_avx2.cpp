// Built with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "cvl/kernels.hpp"
#include "scalar_ops.hpp"

namespace cvl::simd {

namespace {

using v4 = __m256i;

inline v4 load(const u64* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(u64* p, v4 v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }
inline v4 bcast(u64 v) { return _mm256_set1_epi64x(static_cast<long long>(v)); }

// No namespace-scope vector constants: static initializers would run AVX
// code before the CPU check.
inline v4 low32() { return _mm256_set1_epi64x(0xffffffffLL); }

// Picks b where the sign bit of sel is set, else a.
inline v4 select_on_sign(v4 a, v4 b, v4 sel) {
  return _mm256_castpd_si256(
      _mm256_blendv_pd(_mm256_castsi256_pd(a), _mm256_castsi256_pd(b), _mm256_castsi256_pd(sel)));
}

// r in [0, 2p) -> [0, p). With p < 2^63, r - p has its sign bit set exactly
// when r < p.
inline v4 reduce_once(v4 r, v4 p) {
  const v4 t = _mm256_sub_epi64(r, p);
  return select_on_sign(t, r, t);
}

inline v4 add_mod(v4 a, v4 b, v4 p) { return reduce_once(_mm256_add_epi64(a, b), p); }

inline v4 sub_mod(v4 a, v4 b, v4 p) {
  const v4 d = _mm256_sub_epi64(a, b);
  return select_on_sign(d, _mm256_add_epi64(d, p), d);
}

// High 64 bits of the 64x64 product, from four 32x32 partial products.
inline v4 mulhi(v4 a, v4 b) {
  const v4 a_hi = _mm256_srli_epi64(a, 32);
  const v4 b_hi = _mm256_srli_epi64(b, 32);
  const v4 ll = _mm256_mul_epu32(a, b);
  const v4 lh = _mm256_mul_epu32(a, b_hi);
  const v4 hl = _mm256_mul_epu32(a_hi, b);
  const v4 hh = _mm256_mul_epu32(a_hi, b_hi);
  v4 mid = _mm256_add_epi64(_mm256_srli_epi64(ll, 32), _mm256_and_si256(lh, low32()));
  mid = _mm256_add_epi64(mid, _mm256_and_si256(hl, low32()));
  v4 hi = _mm256_add_epi64(hh, _mm256_srli_epi64(lh, 32));
  hi = _mm256_add_epi64(hi, _mm256_srli_epi64(hl, 32));
  return _mm256_add_epi64(hi, _mm256_srli_epi64(mid, 32));
}

inline v4 mullo(v4 a, v4 b) {
  const v4 ll = _mm256_mul_epu32(a, b);
  const v4 cross = _mm256_add_epi64(_mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)),
                                    _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b));
  return _mm256_add_epi64(ll, _mm256_slli_epi64(cross, 32));
}

// q * p mod 2^64 for p = c 2^32 + 1, the shape of every Fourier prime with
// k >= 32; p_hi holds c.
inline v4 mullo_fourier(v4 q, v4 p_hi) {
  return _mm256_add_epi64(q, _mm256_slli_epi64(_mm256_mul_epu32(q, p_hi), 32));
}

inline v4 mul_shoup(v4 x, v4 w, v4 ws, v4 p) {
  const v4 q = mulhi(x, ws);
  const v4 r = _mm256_sub_epi64(mullo(x, w), mullo(q, p));
  return reduce_once(r, p);
}

inline v4 mul_shoup_fourier(v4 x, v4 w, v4 ws, v4 p, v4 p_hi) {
  const v4 q = mulhi(x, ws);
  const v4 r = _mm256_sub_epi64(mullo(x, w), mullo_fourier(q, p_hi));
  return reduce_once(r, p);
}

inline bool fourier_shape(u64 p) { return (p & 0xffffffffULL) == 1; }

inline u64 scalar_shoup_one(u64 p) { return static_cast<u64>((static_cast<scalar::u128>(1) << 64) / p); }

inline v4 mont_mul(v4 a, v4 b, v4 p, v4 p_inv) {
  const v4 a_hi = _mm256_srli_epi64(a, 32);
  const v4 b_hi = _mm256_srli_epi64(b, 32);
  const v4 ll = _mm256_mul_epu32(a, b);
  const v4 lh = _mm256_mul_epu32(a, b_hi);
  const v4 hl = _mm256_mul_epu32(a_hi, b);
  const v4 hh = _mm256_mul_epu32(a_hi, b_hi);
  v4 mid = _mm256_add_epi64(_mm256_srli_epi64(ll, 32), _mm256_and_si256(lh, low32()));
  mid = _mm256_add_epi64(mid, _mm256_and_si256(hl, low32()));
  v4 hi = _mm256_add_epi64(hh, _mm256_srli_epi64(lh, 32));
  hi = _mm256_add_epi64(hi, _mm256_srli_epi64(hl, 32));
  hi = _mm256_add_epi64(hi, _mm256_srli_epi64(mid, 32));
  const v4 lo = _mm256_add_epi64(_mm256_and_si256(ll, low32()), _mm256_slli_epi64(mid, 32));

  const v4 m = mullo(lo, p_inv);
  const v4 mp_hi = mulhi(m, p);
  return sub_mod(hi, mp_hi, p);
}

// Modulus in vector form. Fourier selects the cheaper q * p product.
template <bool Fourier>
struct Mod {
  v4 p;
  v4 p_hi;
  explicit Mod(u64 m) : p(bcast(m)), p_hi(bcast(m >> 32)) {}

  v4 mul(v4 x, v4 w, v4 ws) const {
    if constexpr (Fourier) {
      return mul_shoup_fourier(x, w, ws, p, p_hi);
    } else {
      return mul_shoup(x, w, ws, p);
    }
  }
};

// Runs body(Mod<...>) with the variant matching p.
template <class Body>
inline void with_mod(u64 p, Body&& body) {
  if (fourier_shape(p)) {
    body(Mod<true>(p));
  } else {
    body(Mod<false>(p));
  }
}

void dif_bcast(u64* x, u64* y, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    const v4 vw = bcast(w), vws = bcast(ws);
    for (; i + 4 <= n; i += 4) {
      const v4 a = load(x + i);
      const v4 b = load(y + i);
      store(x + i, add_mod(a, b, m.p));
      store(y + i, m.mul(sub_mod(a, b, m.p), vw, vws));
    }
  });
  for (; i < n; ++i) scalar::dif(x[i], y[i], w, ws, p);
}

void dit_bcast(u64* x, u64* y, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    const v4 vw = bcast(w), vws = bcast(ws);
    for (; i + 4 <= n; i += 4) {
      const v4 a = load(x + i);
      const v4 t = m.mul(load(y + i), vw, vws);
      store(x + i, add_mod(a, t, m.p));
      store(y + i, sub_mod(a, t, m.p));
    }
  });
  for (; i < n; ++i) scalar::dit(x[i], y[i], w, ws, p);
}

void dif_twiddle(u64* x, u64* y, std::size_t n, const u64* w, const u64* ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    for (; i + 4 <= n; i += 4) {
      const v4 a = load(x + i);
      const v4 b = load(y + i);
      store(x + i, add_mod(a, b, m.p));
      store(y + i, m.mul(sub_mod(a, b, m.p), load(w + i), load(ws + i)));
    }
  });
  for (; i < n; ++i) scalar::dif(x[i], y[i], w[i], ws[i], p);
}

void dit_twiddle(u64* x, u64* y, std::size_t n, const u64* w, const u64* ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    for (; i + 4 <= n; i += 4) {
      const v4 a = load(x + i);
      const v4 t = m.mul(load(y + i), load(w + i), load(ws + i));
      store(x + i, add_mod(a, t, m.p));
      store(y + i, sub_mod(a, t, m.p));
    }
  });
  for (; i < n; ++i) scalar::dit(x[i], y[i], w[i], ws[i], p);
}

void mont_mul_kernel(u64* x, const u64* y, std::size_t n, u64 p, u64 p_inv) {
  const v4 vp = bcast(p), vinv = bcast(p_inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(x + i, mont_mul(load(x + i), load(y + i), vp, vinv));
  for (; i < n; ++i) x[i] = scalar::mont_mul(x[i], y[i], p, p_inv);
}

void scale_twiddle(u64* x, std::size_t n, const u64* w, const u64* ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    for (; i + 4 <= n; i += 4) store(x + i, m.mul(load(x + i), load(w + i), load(ws + i)));
  });
  for (; i < n; ++i) x[i] = scalar::mul_shoup(x[i], w[i], ws[i], p);
}

void scale_bcast(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    const v4 vw = bcast(w), vws = bcast(ws);
    for (; i + 4 <= n; i += 4) store(x + i, m.mul(load(x + i), vw, vws));
  });
  for (; i < n; ++i) x[i] = scalar::mul_shoup(x[i], w, ws, p);
}

void scale_bcast_to(u64* dst, const u64* src, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t i = 0;
  with_mod(p, [&](const auto m) {
    const v4 vw = bcast(w), vws = bcast(ws);
    for (; i + 4 <= n; i += 4) store(dst + i, m.mul(load(src + i), vw, vws));
  });
  for (; i < n; ++i) dst[i] = scalar::mul_shoup(src[i], w, ws, p);
}

// Two blocks of four per iteration. With v0 = x[0..3], v1 = x[4..7]:
// lo/hi 128-bit halves give the h = 2 pairs, unpacklo/hi the h = 1 pairs.
void dif_tail4(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t s = 0;
  with_mod(p, [&](const auto m) {
    const v4 tw = _mm256_setr_epi64x(1, static_cast<long long>(w), 1, static_cast<long long>(w));
    const v4 tws = _mm256_setr_epi64x(static_cast<long long>(scalar_shoup_one(p)), static_cast<long long>(ws),
                                      static_cast<long long>(scalar_shoup_one(p)), static_cast<long long>(ws));
    for (; s + 8 <= n; s += 8) {
      const v4 v0 = load(x + s);
      const v4 v1 = load(x + s + 4);
      const v4 a = _mm256_permute2x128_si256(v0, v1, 0x20);  // x0 x1 x4 x5
      const v4 b = _mm256_permute2x128_si256(v0, v1, 0x31);  // x2 x3 x6 x7
      const v4 a2 = add_mod(a, b, m.p);
      const v4 b2 = m.mul(sub_mod(a, b, m.p), tw, tws);
      const v4 c = _mm256_unpacklo_epi64(a2, b2);  // x0 x2 x4 x6
      const v4 d = _mm256_unpackhi_epi64(a2, b2);  // x1 x3 x5 x7
      const v4 c2 = add_mod(c, d, m.p);
      const v4 d2 = sub_mod(c, d, m.p);
      const v4 lo = _mm256_unpacklo_epi64(c2, d2);  // y0 y1 y4 y5
      const v4 hi = _mm256_unpackhi_epi64(c2, d2);  // y2 y3 y6 y7
      store(x + s, _mm256_permute2x128_si256(lo, hi, 0x20));
      store(x + s + 4, _mm256_permute2x128_si256(lo, hi, 0x31));
    }
  });
  for (; s + 4 <= n; s += 4) scalar::dif_tail4(x + s, w, ws, p);
}

void dit_head4(u64* x, std::size_t n, u64 w, u64 ws, u64 p) {
  std::size_t s = 0;
  with_mod(p, [&](const auto m) {
    const v4 tw = _mm256_setr_epi64x(1, static_cast<long long>(w), 1, static_cast<long long>(w));
    const v4 tws = _mm256_setr_epi64x(static_cast<long long>(scalar_shoup_one(p)), static_cast<long long>(ws),
                                      static_cast<long long>(scalar_shoup_one(p)), static_cast<long long>(ws));
    for (; s + 8 <= n; s += 8) {
      const v4 v0 = load(x + s);
      const v4 v1 = load(x + s + 4);
      const v4 lo = _mm256_permute2x128_si256(v0, v1, 0x20);  // x0 x1 x4 x5
      const v4 hi = _mm256_permute2x128_si256(v0, v1, 0x31);  // x2 x3 x6 x7
      const v4 c = _mm256_unpacklo_epi64(lo, hi);             // x0 x2 x4 x6
      const v4 d = _mm256_unpackhi_epi64(lo, hi);             // x1 x3 x5 x7
      const v4 c2 = add_mod(c, d, m.p);                       // b0 b2 b4 b6
      const v4 d2 = sub_mod(c, d, m.p);                       // b1 b3 b5 b7
      const v4 a = _mm256_unpacklo_epi64(c2, d2);             // b0 b1 b4 b5
      const v4 b = m.mul(_mm256_unpackhi_epi64(c2, d2), tw, tws);  // b2 b3w b6 b7w
      const v4 top = add_mod(a, b, m.p);                      // y0 y1 y4 y5
      const v4 bot = sub_mod(a, b, m.p);                      // y2 y3 y6 y7
      store(x + s, _mm256_permute2x128_si256(top, bot, 0x20));
      store(x + s + 4, _mm256_permute2x128_si256(top, bot, 0x31));
    }
  });
  for (; s + 4 <= n; s += 4) scalar::dit_head4(x + s, w, ws, p);
}

void embed(u64* dst, const i64* digits, std::size_t n, u64 p) {
  const v4 vp = bcast(p);
  const v4 zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const v4 d = load(reinterpret_cast<const u64*>(digits + i));
    const v4 neg = _mm256_cmpgt_epi64(zero, d);
    store(dst + i, _mm256_add_epi64(d, _mm256_and_si256(neg, vp)));
  }
  for (; i < n; ++i) {
    const i64 v = digits[i];
    dst[i] = v < 0 ? p + static_cast<u64>(v) : static_cast<u64>(v);
  }
}

}  // namespace

const Kernels* avx2_kernels_unchecked() {
  static const Kernels k{Isa::kAvx2,     "avx2",          dif_bcast,     dit_bcast,   dif_twiddle,
                         dit_twiddle,    mont_mul_kernel, scale_twiddle, scale_bcast, scale_bcast_to,
                         dif_tail4,      dit_head4,       embed};
  return &k;
}

}  // namespace cvl::simd
