#pragma once

// Scalar modular primitives shared by the reference kernels and the scalar
// tails of the vector kernels.

#include <cstdint>

namespace cvl::simd::scalar {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add(u64 a, u64 b, u64 p) {
  const u64 s = a + b;
  return s >= p ? s - p : s;
}

inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 mul_shoup(u64 x, u64 w, u64 ws, u64 p) {
  const u64 q = static_cast<u64>((static_cast<u128>(x) * ws) >> 64);
  const u64 r = x * w - q * p;
  return r >= p ? r - p : r;
}

inline u64 mont_mul(u64 a, u64 b, u64 p, u64 p_inv) {
  const u128 t = static_cast<u128>(a) * b;
  const u64 m = static_cast<u64>(t) * p_inv;
  const u64 mp_hi = static_cast<u64>((static_cast<u128>(m) * p) >> 64);
  const u64 t_hi = static_cast<u64>(t >> 64);
  return t_hi >= mp_hi ? t_hi - mp_hi : t_hi + p - mp_hi;
}

inline void dif(u64& x, u64& y, u64 w, u64 ws, u64 p) {
  const u64 a = x;
  const u64 b = y;
  x = add(a, b, p);
  y = mul_shoup(sub(a, b, p), w, ws, p);
}

inline void dit(u64& x, u64& y, u64 w, u64 ws, u64 p) {
  const u64 a = x;
  const u64 t = mul_shoup(y, w, ws, p);
  x = add(a, t, p);
  y = sub(a, t, p);
}

// Last two decimation-in-frequency stages on one block of four; w has order 4.
inline void dif_tail4(u64* x, u64 w, u64 ws, u64 p) {
  const u64 b0 = add(x[0], x[2], p);
  const u64 b2 = sub(x[0], x[2], p);
  const u64 b1 = add(x[1], x[3], p);
  const u64 b3 = mul_shoup(sub(x[1], x[3], p), w, ws, p);
  x[0] = add(b0, b1, p);
  x[1] = sub(b0, b1, p);
  x[2] = add(b2, b3, p);
  x[3] = sub(b2, b3, p);
}

// First two decimation-in-time stages on one block of four; w has order 4.
inline void dit_head4(u64* x, u64 w, u64 ws, u64 p) {
  const u64 b0 = add(x[0], x[1], p);
  const u64 b1 = sub(x[0], x[1], p);
  const u64 b2 = add(x[2], x[3], p);
  const u64 b3 = mul_shoup(sub(x[2], x[3], p), w, ws, p);
  x[0] = add(b0, b2, p);
  x[2] = sub(b0, b2, p);
  x[1] = add(b1, b3, p);
  x[3] = sub(b1, b3, p);
}

}  // namespace cvl::simd::scalar
