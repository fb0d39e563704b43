#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cvl/codec.hpp"
#include "cvl/grid.hpp"
#include "cvl/modfield.hpp"
#include "cvl/params.hpp"

namespace cvl {

enum class Direction { kForward, kInverse };

// Twiddles of one power-of-two length n over one prime, with Shoup
// companions. forward[h + j] = w_{2h}^j for every power of two h < n and
// j < h; inverse holds the reciprocals.
struct NttTables {
  PrimeField field;
  std::size_t size = 0;
  std::vector<u64> forward, forward_shoup;
  std::vector<u64> inverse, inverse_shoup;
  u64 size_inv = 1;
  u64 size_inv_shoup = 0;
};

NttTables make_ntt_tables(const PrimeField& field, std::size_t size);

// Forward: natural order in, bit-reversed evaluations out. Inverse: the
// reverse, including the 1/n scaling, so inverse(forward(v)) == v.
void ntt_inplace(std::span<u64> v, const NttTables& tables, Direction dir);

// Everything the 2D transforms of one plan need for one prime.
struct RootTable {
  PrimeField field;
  std::size_t K = 0;
  std::size_t s_y = 0;
  u64 omega = 0;  // order K
  u64 theta = 0;  // order 2K, theta^2 = omega
  NttTables x;    // length K
  NttTables y;    // length s_y
  std::vector<u64> twist, twist_shoup;      // theta^j
  std::vector<u64> untwist, untwist_shoup;  // theta^-j 2^64 / (K s_y)
  u64 cyclic_scale = 0;                     // 2^64 / (K s_y)
  u64 cyclic_scale_shoup = 0;
};

RootTable make_root_table(const MulPlan& plan, std::size_t prime_index);

// Row i starts at data[i * stride]; stride >= cols.
struct ResidueGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;
  std::size_t prime_index = 0;
  GridStorage data;

  u64 at(std::size_t i, std::size_t j) const { return data[i * stride + j]; }
  std::span<const u64> row(std::size_t i) const { return {data.data() + i * stride, cols}; }
};

struct TransformTimings {
  double forward_ms = 0;
  double pointwise_ms = 0;
  double inverse_ms = 0;
};

// A(x, y) B(x, y) mod (x^K - 1, p), s_y rows.
ResidueGrid cyclic_convolution(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                               std::size_t prime_index, unsigned workers = 1);
// A(x, y) B(x, y) mod (x^K + 1, p) via the theta twist, s_y rows.
ResidueGrid negacyclic_convolution(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                                   std::size_t prime_index, unsigned workers = 1);

// Both products sharing the y transforms: s_y rows of 2K columns, the cyclic
// product in [0, K) and the negacyclic one in [K, 2K).
ResidueGrid paired_convolution(const DigitMatrix& a, const DigitMatrix& b, const RootTable& roots,
                               std::size_t prime_index, unsigned workers = 1,
                               TransformTimings* timings = nullptr);

}  // namespace cvl
