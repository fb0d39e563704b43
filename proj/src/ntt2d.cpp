#include "cvl/ntt2d.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>

#include <sys/mman.h>

#include "cvl/error.hpp"
#include "cvl/kernels.hpp"
#include "cvl/parallel.hpp"
#include "kernels/scalar_ops.hpp"

namespace cvl {

namespace {

using Clock = std::chrono::steady_clock;
namespace scalar = simd::scalar;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Narrowest column band given to one vertical transform task.
constexpr std::size_t kMinBand = 32;

// Row stride for a grid of `cols` columns. Power-of-two strides put a whole
// column stripe into a handful of cache sets, so wide rows get one extra line.
std::size_t padded_stride(std::size_t cols) { return cols >= 64 ? cols + 8 : cols; }

void row_dif(u64* x, std::size_t n, const NttTables& t, const simd::Kernels& k) {
  const u64 p = t.field.modulus();
  if (n == 2) {
    const u64 a0 = x[0], a1 = x[1];
    x[0] = scalar::add(a0, a1, p);
    x[1] = scalar::sub(a0, a1, p);
    return;
  }
  for (std::size_t h = n / 2; h >= 4; h /= 2) {
    for (std::size_t s = 0; s < n; s += 2 * h) {
      k.dif_twiddle(x + s, x + s + h, h, t.forward.data() + h, t.forward_shoup.data() + h, p);
    }
  }
  if (n >= 4) k.dif_tail4(x, n, t.forward[3], t.forward_shoup[3], p);
}

void row_dit(u64* x, std::size_t n, const NttTables& t, const simd::Kernels& k) {
  const u64 p = t.field.modulus();
  if (n == 2) {
    const u64 a0 = x[0], a1 = x[1];
    x[0] = scalar::add(a0, a1, p);
    x[1] = scalar::sub(a0, a1, p);
    return;
  }
  if (n >= 4) k.dit_head4(x, n, t.inverse[3], t.inverse_shoup[3], p);
  for (std::size_t h = 4; h < n; h *= 2) {
    for (std::size_t s = 0; s < n; s += 2 * h) {
      k.dit_twiddle(x + s, x + s + h, h, t.inverse.data() + h, t.inverse_shoup.data() + h, p);
    }
  }
}

// Vertical transforms over a band of w contiguous columns, depth first.
// Three radix-2 stages are fused per pass: for fixed j the eight rows
// j + t n/8 only interact with each other during stages n/2, n/4 and n/8.
void col_dif(u64* base, std::size_t n, std::size_t ld, std::size_t w, const NttTables& t,
             const simd::Kernels& k) {
  const u64 p = t.field.modulus();
  const u64* tw = t.forward.data();
  const u64* ts = t.forward_shoup.data();
  if (n >= 8) {
    const std::size_t e = n / 8;
    for (std::size_t j = 0; j < e; ++j) {
      u64* r[8];
      for (std::size_t q = 0; q < 8; ++q) r[q] = base + (j + q * e) * ld;
      for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t i = n / 2 + j + q * e;
        k.dif_bcast(r[q], r[q + 4], w, tw[i], ts[i], p);
      }
      for (std::size_t q : {0, 1, 4, 5}) {
        const std::size_t i = n / 4 + j + (q % 4) * e;
        k.dif_bcast(r[q], r[q + 2], w, tw[i], ts[i], p);
      }
      for (std::size_t q : {0, 2, 4, 6}) k.dif_bcast(r[q], r[q + 1], w, tw[e + j], ts[e + j], p);
    }
    for (std::size_t q = 0; q < 8; ++q) col_dif(base + q * e * ld, e, ld, w, t, k);
    return;
  }
  for (std::size_t h = n / 2; h >= 1; h /= 2) {
    for (std::size_t s = 0; s < n; s += 2 * h) {
      for (std::size_t j = 0; j < h; ++j) {
        k.dif_bcast(base + (s + j) * ld, base + (s + j + h) * ld, w, tw[h + j], ts[h + j], p);
      }
    }
  }
}

// As col_dif, with rows [n/2, n) taken as zero instead of being read; the
// first stage then reduces to x[j + n/2] = x[j] w.
void col_dif_upper_zero(u64* base, std::size_t n, std::size_t ld, std::size_t w, const NttTables& t,
                        const simd::Kernels& k) {
  const u64 p = t.field.modulus();
  const u64* tw = t.forward.data();
  const u64* ts = t.forward_shoup.data();
  if (n < 8) {
    for (std::size_t i = n / 2; i < n; ++i) std::fill_n(base + i * ld, w, u64{0});
    col_dif(base, n, ld, w, t, k);
    return;
  }
  const std::size_t e = n / 8;
  for (std::size_t j = 0; j < e; ++j) {
    u64* r[8];
    for (std::size_t q = 0; q < 8; ++q) r[q] = base + (j + q * e) * ld;
    for (std::size_t q = 0; q < 4; ++q) {
      const std::size_t i = n / 2 + j + q * e;
      k.scale_bcast_to(r[q + 4], r[q], w, tw[i], ts[i], p);
    }
    for (std::size_t q : {0, 1, 4, 5}) {
      const std::size_t i = n / 4 + j + (q % 4) * e;
      k.dif_bcast(r[q], r[q + 2], w, tw[i], ts[i], p);
    }
    for (std::size_t q : {0, 2, 4, 6}) k.dif_bcast(r[q], r[q + 1], w, tw[e + j], ts[e + j], p);
  }
  for (std::size_t q = 0; q < 8; ++q) col_dif(base + q * e * ld, e, ld, w, t, k);
}

void col_dit(u64* base, std::size_t n, std::size_t ld, std::size_t w, const NttTables& t,
             const simd::Kernels& k) {
  const u64 p = t.field.modulus();
  const u64* tw = t.inverse.data();
  const u64* ts = t.inverse_shoup.data();
  if (n >= 8) {
    const std::size_t e = n / 8;
    for (std::size_t q = 0; q < 8; ++q) col_dit(base + q * e * ld, e, ld, w, t, k);
    for (std::size_t j = 0; j < e; ++j) {
      u64* r[8];
      for (std::size_t q = 0; q < 8; ++q) r[q] = base + (j + q * e) * ld;
      for (std::size_t q : {0, 2, 4, 6}) k.dit_bcast(r[q], r[q + 1], w, tw[e + j], ts[e + j], p);
      for (std::size_t q : {0, 1, 4, 5}) {
        const std::size_t i = n / 4 + j + (q % 4) * e;
        k.dit_bcast(r[q], r[q + 2], w, tw[i], ts[i], p);
      }
      for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t i = n / 2 + j + q * e;
        k.dit_bcast(r[q], r[q + 4], w, tw[i], ts[i], p);
      }
    }
    return;
  }
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t s = 0; s < n; s += 2 * h) {
      for (std::size_t j = 0; j < h; ++j) {
        k.dit_bcast(base + (s + j) * ld, base + (s + j + h) * ld, w, tw[h + j], ts[h + j], p);
      }
    }
  }
}

// Splits [c_begin, c_end) into one band per worker; bands stay wide so rows
// are read as long contiguous runs.
void columns(u64* grid, std::size_t rows, std::size_t ld, std::size_t c_begin, std::size_t c_end,
             const NttTables& t, Direction dir, unsigned workers, const simd::Kernels& k,
             bool upper_zero = false) {
  const std::size_t width = c_end - c_begin;
  const std::size_t bands = std::max<std::size_t>(1, std::min<std::size_t>(workers, width / kMinBand));
  parallel_for(bands, static_cast<unsigned>(bands), [&](std::size_t b) {
    const std::size_t c0 = c_begin + width * b / bands;
    const std::size_t c1 = c_begin + width * (b + 1) / bands;
    if (dir == Direction::kForward && upper_zero) {
      col_dif_upper_zero(grid + c0, rows, ld, c1 - c0, t, k);
    } else if (dir == Direction::kForward) {
      col_dif(grid + c0, rows, ld, c1 - c0, t, k);
    } else {
      col_dit(grid + c0, rows, ld, c1 - c0, t, k);
    }
  });
}

void check_conforming(const DigitMatrix& a, const DigitMatrix& b, std::size_t K, std::size_t s_y) {
  if (a.K != K || b.K != K) {
    throw Error(ErrorCode::kDimensionMismatch, "digit matrices must have K columns");
  }
  if (a.d == 0 || b.d == 0 || a.d + b.d - 1 > s_y) {
    throw Error(ErrorCode::kDimensionMismatch, "digit matrices do not fit the y transform length");
  }
  if (a.digits.size() != a.d * a.K || b.digits.size() != b.d * b.K) {
    throw Error(ErrorCode::kDimensionMismatch, "digit matrix storage does not match its shape");
  }
}

}  // namespace

void* grid_allocate(std::size_t bytes) {
  constexpr std::size_t kHuge = std::size_t{2} << 20;
  if (bytes < kHuge) {
    void* p = ::operator new(bytes);
    return p;
  }
  const std::size_t rounded = (bytes + kHuge - 1) / kHuge * kHuge;
  void* p = std::aligned_alloc(kHuge, rounded);
  if (p == nullptr) throw std::bad_alloc();
#ifdef MADV_HUGEPAGE
  madvise(p, rounded, MADV_HUGEPAGE);
#endif
  return p;
}

void grid_free(void* p, std::size_t bytes) noexcept {
  if (bytes < (std::size_t{2} << 20)) {
    ::operator delete(p);
  } else {
    std::free(p);
  }
}

NttTables make_ntt_tables(const PrimeField& field, std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::kTransformLengthUnsupported,
                "length " + std::to_string(size) + " is not a power of two");
  }
  const unsigned log_n = static_cast<unsigned>(std::countr_zero(size));
  if (log_n > field.spec().k) {
    throw Error(ErrorCode::kTransformLengthUnsupported,
                "length 2^" + std::to_string(log_n) + " exceeds 2^" + std::to_string(field.spec().k) +
                    " for p = " + std::to_string(field.modulus()));
  }
  NttTables t;
  t.field = field;
  t.size = size;
  t.forward.assign(size, 0);
  t.forward_shoup.assign(size, 0);
  t.inverse.assign(size, 0);
  t.inverse_shoup.assign(size, 0);
  for (std::size_t h = 1; h < size; h *= 2) {
    const u64 w = primitive_root_of_order(2 * h, field.spec());
    const u64 w_inv = field.inv(w);
    u64 f = 1, g = 1;
    for (std::size_t j = 0; j < h; ++j) {
      t.forward[h + j] = f;
      t.forward_shoup[h + j] = field.shoup(f);
      t.inverse[h + j] = g;
      t.inverse_shoup[h + j] = field.shoup(g);
      f = field.mul(f, w);
      g = field.mul(g, w_inv);
    }
  }
  t.size_inv = field.inv(static_cast<u64>(size) % field.modulus());
  t.size_inv_shoup = field.shoup(t.size_inv);
  return t;
}

void ntt_inplace(std::span<u64> v, const NttTables& tables, Direction dir) {
  if (v.size() != tables.size) {
    throw Error(ErrorCode::kTransformLengthUnsupported,
                "vector length " + std::to_string(v.size()) + " does not match table length " +
                    std::to_string(tables.size));
  }
  if (v.size() < 2) return;
  const auto& k = simd::active_kernels();
  if (dir == Direction::kForward) {
    row_dif(v.data(), v.size(), tables, k);
  } else {
    row_dit(v.data(), v.size(), tables, k);
    k.scale_bcast(v.data(), v.size(), tables.size_inv, tables.size_inv_shoup, tables.field.modulus());
  }
}

RootTable make_root_table(const MulPlan& plan, std::size_t prime_index) {
  if (prime_index >= plan.primes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prime index out of range");
  }
  RootTable r;
  r.field = PrimeField(plan.primes[prime_index]);
  r.K = plan.K;
  r.s_y = plan.s_y;
  const auto& f = r.field;
  r.theta = primitive_root_of_order(2 * plan.K, f.spec());
  r.omega = f.mul(r.theta, r.theta);
  r.x = make_ntt_tables(f, plan.K);
  r.y = make_ntt_tables(f, plan.s_y);
  const u64 n_inv = f.inv(static_cast<u64>(plan.K * plan.s_y % f.modulus()));
  r.cyclic_scale = f.mul(f.mont_radix(), n_inv);
  r.cyclic_scale_shoup = f.shoup(r.cyclic_scale);
  const u64 theta_inv = f.inv(r.theta);
  r.twist.resize(plan.K);
  r.twist_shoup.resize(plan.K);
  r.untwist.resize(plan.K);
  r.untwist_shoup.resize(plan.K);
  u64 t = 1, u = r.cyclic_scale;
  for (std::size_t j = 0; j < plan.K; ++j) {
    r.twist[j] = t;
    r.twist_shoup[j] = f.shoup(t);
    r.untwist[j] = u;
    r.untwist_shoup[j] = f.shoup(u);
    t = f.mul(t, r.theta);
    u = f.mul(u, theta_inv);
  }
  return r;
}

ResidueGrid paired_convolution(const DigitMatrix& a, const DigitMatrix& b, const RootTable& roots,
                               std::size_t prime_index, unsigned workers, TransformTimings* timings) {
  const std::size_t K = roots.K;
  const std::size_t s_y = roots.s_y;
  const std::size_t W = 2 * K;
  const std::size_t ld = padded_stride(W);
  check_conforming(a, b, K, s_y);
  const auto& k = simd::active_kernels();
  const u64 p = roots.field.modulus();

  auto t0 = Clock::now();
  auto forward = [&](const DigitMatrix& m) {
    GridStorage g(s_y * ld);
    parallel_for(m.d, workers,
                 [&](std::size_t i) { k.embed(g.data() + i * ld, m.digits.data() + i * K, K, p); });
    // Rows past d are zero; those in the upper half are never read.
    const bool upper_zero = 2 * m.d <= s_y;
    const std::size_t zero_end = upper_zero ? s_y / 2 : s_y;
    for (std::size_t i = m.d; i < zero_end; ++i) std::fill_n(g.data() + i * ld, K, u64{0});
    columns(g.data(), s_y, ld, 0, K, roots.y, Direction::kForward, workers, k, upper_zero);
    parallel_for(s_y, workers, [&](std::size_t i) {
      u64* r = g.data() + i * ld;
      std::copy(r, r + K, r + K);
      k.scale_twiddle(r + K, K, roots.twist.data(), roots.twist_shoup.data(), p);
      row_dif(r, K, roots.x, k);
      row_dif(r + K, K, roots.x, k);
    });
    return g;
  };
  GridStorage ga = forward(a);
  {
    GridStorage gb = &a == &b ? GridStorage{} : forward(b);
    const u64* other = gb.empty() ? ga.data() : gb.data();
    if (timings) timings->forward_ms += ms_since(t0);

    t0 = Clock::now();
    const u64 p_inv = roots.field.mont_inverse();
    parallel_for(s_y, workers, [&](std::size_t i) { k.mont_mul(ga.data() + i * ld, other + i * ld, W, p, p_inv); });
    if (timings) timings->pointwise_ms += ms_since(t0);
  }

  t0 = Clock::now();
  parallel_for(s_y, workers, [&](std::size_t i) {
    u64* r = ga.data() + i * ld;
    row_dit(r, K, roots.x, k);
    row_dit(r + K, K, roots.x, k);
    k.scale_bcast(r, K, roots.cyclic_scale, roots.cyclic_scale_shoup, p);
    k.scale_twiddle(r + K, K, roots.untwist.data(), roots.untwist_shoup.data(), p);
  });
  columns(ga.data(), s_y, ld, 0, W, roots.y, Direction::kInverse, workers, k);
  if (timings) timings->inverse_ms += ms_since(t0);

  return ResidueGrid{s_y, W, ld, prime_index, std::move(ga)};
}

namespace {

ResidueGrid half_of(const ResidueGrid& paired, std::size_t K, bool right) {
  ResidueGrid out{paired.rows, K, K, paired.prime_index, GridStorage(paired.rows * K)};
  for (std::size_t i = 0; i < paired.rows; ++i) {
    const u64* src = paired.data.data() + i * paired.stride + (right ? K : 0);
    std::copy(src, src + K, out.data.data() + i * K);
  }
  return out;
}

void check_plan(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan) {
  if (a.d != plan.d || b.d != plan.d || a.K != plan.K || b.K != plan.K) {
    throw Error(ErrorCode::kDimensionMismatch, "digit matrices do not conform to the plan");
  }
}

}  // namespace

ResidueGrid cyclic_convolution(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                               std::size_t prime_index, unsigned workers) {
  check_plan(a, b, plan);
  const RootTable roots = make_root_table(plan, prime_index);
  return half_of(paired_convolution(a, b, roots, prime_index, workers), plan.K, false);
}

ResidueGrid negacyclic_convolution(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                                   std::size_t prime_index, unsigned workers) {
  check_plan(a, b, plan);
  const RootTable roots = make_root_table(plan, prime_index);
  return half_of(paired_convolution(a, b, roots, prime_index, workers), plan.K, true);
}

}  // namespace cvl
