#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvl/zpoly.hpp"

namespace cvl {

using u128 = unsigned __int128;
using i128 = __int128;

// A Fourier prime p = q * 2^k + 1 below 2^63 with a primitive root.
struct PrimeSpec {
  u64 p = 0;
  u64 q = 0;
  unsigned k = 0;
  u64 generator = 0;

  bool operator==(const PrimeSpec&) const = default;
};

// Arithmetic in Z/p on canonical residues [0, p). Besides the plain
// operations it precomputes the constants the transform kernels need:
// Shoup quotients for fixed multipliers and the Montgomery inverse.
class PrimeField {
 public:
  PrimeField() = default;
  explicit PrimeField(const PrimeSpec& spec);

  const PrimeSpec& spec() const { return spec_; }
  u64 modulus() const { return p_; }

  u64 add(u64 a, u64 b) const {
    const u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p_); }
  u64 pow(u64 base, u64 exp) const;
  u64 inv(u64 a) const;
  u64 from_signed(i64 v) const;

  // floor(w * 2^64 / p), the companion of a fixed multiplier w.
  u64 shoup(u64 w) const { return static_cast<u64>((static_cast<u128>(w) << 64) / p_); }
  u64 mul_shoup(u64 x, u64 w, u64 w_shoup) const {
    const u64 q = static_cast<u64>((static_cast<u128>(x) * w_shoup) >> 64);
    const u64 r = x * w - q * p_;
    return r >= p_ ? r - p_ : r;
  }

  // a * b * 2^-64 mod p.
  u64 mont_mul(u64 a, u64 b) const {
    const u128 t = static_cast<u128>(a) * b;
    const u64 m = static_cast<u64>(t) * p_inv_;
    const u64 mp_hi = static_cast<u64>((static_cast<u128>(m) * p_) >> 64);
    const u64 t_hi = static_cast<u64>(t >> 64);
    return t_hi >= mp_hi ? t_hi - mp_hi : t_hi + p_ - mp_hi;
  }
  // p^-1 mod 2^64.
  u64 mont_inverse() const { return p_inv_; }
  // 2^64 mod p.
  u64 mont_radix() const { return r_; }

 private:
  PrimeSpec spec_{};
  u64 p_ = 0;
  u64 p_inv_ = 0;
  u64 r_ = 0;
};

u64 mod_mul(u64 a, u64 b, const PrimeSpec& prime);

// generator^((p-1)/n); throws kOrderUnavailable unless n is a power of two
// dividing p - 1.
u64 primitive_root_of_order(u64 n, const PrimeSpec& prime);

// The integer in [-(p-1)/2, (p-1)/2] congruent to r.
i64 lift_symmetric(u64 r, const PrimeSpec& prime);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(u64 n);
// Distinct prime factors of n (trial division after stripping powers of two).
std::vector<u64> prime_factors(u64 n);
bool is_primitive_root(u64 g, u64 p);

// Precomputed Garner reconstruction for up to three distinct primes. The
// result is the symmetric representative |x| <= (prod p_i - 1) / 2.
class CrtContext {
 public:
  explicit CrtContext(std::span<const PrimeSpec> primes);

  std::size_t prime_count() const { return fields_.size(); }
  // Words of the modulus product, for sizing outputs.
  std::size_t product_words() const { return product_.size(); }

  // residues[i] belongs to prime i. Returns false when the symmetric value
  // does not fit in out.
  bool combine(std::span<const u64> residues, std::span<u64> out) const;

  // combine() for exactly two primes and at least two output words.
  void combine_pair(u64 r0, u64 r1, u64* out, std::size_t words) const {
    const PrimeField& f1 = fields_[1];
    const u64 p1 = f1.modulus();
    const u64 r0_1 = r0 < p1 ? r0 : (r0 < 2 * p1 ? r0 - p1 : r0 % p1);
    const u64 t = f1.mul_shoup(f1.sub(r1, r0_1), garner_inv_[1], garner_inv_shoup_);
    const u128 x = static_cast<u128>(fields_[0].modulus()) * t + r0;
    const u128 v = x > half2_ ? x - product2_ : x;
    out[0] = static_cast<u64>(v);
    out[1] = static_cast<u64>(v >> 64);
    const u64 ext = static_cast<u64>(static_cast<i64>(out[1]) >> 63);
    for (std::size_t i = 2; i < words; ++i) out[i] = ext;
  }

 private:
  std::vector<PrimeField> fields_;
  // inverse of (p_0 ... p_{i-1}) mod p_i, i >= 1
  std::vector<u64> garner_inv_;
  u64 garner_inv_shoup_ = 0;
  std::vector<u64> product_;       // prod p_i
  std::vector<u64> half_product_;  // (prod p_i - 1) / 2
  u128 product2_ = 0;
  u128 half2_ = 0;
};

WideInt crt_combine(std::span<const u64> residues, std::span<const PrimeSpec> primes,
                    std::size_t words);

}  // namespace cvl
