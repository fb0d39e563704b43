#include "cvl/modfield.hpp"

#include <algorithm>
#include <bit>

#include "cvl/error.hpp"

namespace cvl {

namespace {

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  u64 b = base % m;
  while (exp != 0) {
    if (exp & 1) result = static_cast<u64>(static_cast<u128>(result) * b % m);
    b = static_cast<u64>(static_cast<u128>(b) * b % m);
    exp >>= 1;
  }
  return result;
}

// Newton iteration for p^-1 mod 2^64 (p odd).
u64 inverse_mod_2_64(u64 p) {
  u64 x = p;  // correct to 3 bits
  for (int i = 0; i < 5; ++i) x *= 2 - p * x;
  return x;
}

// Multiword helpers for the Garner path, little-endian unsigned.
void mul_small(std::vector<u64>& x, u64 m) {
  u64 carry = 0;
  for (auto& w : x) {
    const u128 t = static_cast<u128>(w) * m + carry;
    w = static_cast<u64>(t);
    carry = static_cast<u64>(t >> 64);
  }
  if (carry != 0) x.push_back(carry);
}

u64 mod_small(std::span<const u64> x, u64 m) {
  u128 r = 0;
  for (std::size_t i = x.size(); i-- > 0;) r = ((r << 64) | x[i]) % m;
  return static_cast<u64>(r);
}

int compare(std::span<const u64> a, std::span<const u64> b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = n; i-- > 0;) {
    const u64 x = i < a.size() ? a[i] : 0;
    const u64 y = i < b.size() ? b[i] : 0;
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

}  // namespace

PrimeField::PrimeField(const PrimeSpec& spec) : spec_(spec), p_(spec.p) {
  if (p_ < 3 || (p_ & 1) == 0 || p_ >= (u64{1} << 63)) {
    throw Error(ErrorCode::kInvalidArgument, "field modulus must be an odd prime below 2^63");
  }
  p_inv_ = inverse_mod_2_64(p_);
  r_ = static_cast<u64>((static_cast<u128>(1) << 64) % p_);
}

u64 PrimeField::pow(u64 base, u64 exp) const { return powmod(base, exp, p_); }

u64 PrimeField::inv(u64 a) const {
  if (a % p_ == 0) throw Error(ErrorCode::kInvalidArgument, "zero has no inverse");
  return powmod(a, p_ - 2, p_);
}

u64 PrimeField::from_signed(i64 v) const {
  if (v >= 0) return static_cast<u64>(v) % p_;
  const u64 m = static_cast<u64>(-(v + 1)) % p_;  // |v| - 1, avoids overflow at INT64_MIN
  return sub(p_ - 1, m);
}

u64 mod_mul(u64 a, u64 b, const PrimeSpec& prime) {
  return static_cast<u64>(static_cast<u128>(a) * b % prime.p);
}

u64 primitive_root_of_order(u64 n, const PrimeSpec& prime) {
  if (n == 0 || !std::has_single_bit(n) || (prime.p - 1) % n != 0) {
    throw Error(ErrorCode::kOrderUnavailable,
                "no element of order " + std::to_string(n) + " mod " + std::to_string(prime.p));
  }
  return powmod(prime.generator, (prime.p - 1) / n, prime.p);
}

i64 lift_symmetric(u64 r, const PrimeSpec& prime) {
  const u64 half = (prime.p - 1) / 2;
  return r > half ? -static_cast<i64>(prime.p - r) : static_cast<i64>(r);
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 b : kBases) {
    if (n % b == 0) return n == b;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = static_cast<u64>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  if (n % 2 == 0) {
    out.push_back(2);
    while (n % 2 == 0) n /= 2;
  }
  for (u64 f = 3; f <= n / f; f += 2) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_primitive_root(u64 g, u64 p) {
  if (g % p == 0) return false;
  for (u64 r : prime_factors(p - 1)) {
    if (powmod(g, (p - 1) / r, p) == 1) return false;
  }
  return true;
}

CrtContext::CrtContext(std::span<const PrimeSpec> primes) {
  if (primes.empty() || primes.size() > 3) {
    throw Error(ErrorCode::kInvalidArgument, "CRT supports one to three primes");
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[i].p == primes[j].p) {
        throw Error(ErrorCode::kModuliNotCoprime, "duplicate prime " + std::to_string(primes[i].p));
      }
    }
    fields_.emplace_back(primes[i]);
  }
  product_ = {fields_[0].modulus()};
  garner_inv_.push_back(0);
  for (std::size_t i = 1; i < fields_.size(); ++i) {
    const auto& f = fields_[i];
    garner_inv_.push_back(f.inv(mod_small(product_, f.modulus())));
    mul_small(product_, f.modulus());
  }
  half_product_ = product_;
  half_product_[0] -= 1;  // product of odd primes is odd
  {
    u64 carry = 0;
    for (std::size_t i = half_product_.size(); i-- > 0;) {
      const u64 w = half_product_[i];
      half_product_[i] = (w >> 1) | (carry << 63);
      carry = w & 1;
    }
  }
  if (fields_.size() == 2) {
    product2_ = static_cast<u128>(fields_[0].modulus()) * fields_[1].modulus();
    half2_ = (product2_ - 1) / 2;
    garner_inv_shoup_ = fields_[1].shoup(garner_inv_[1]);
  }
}

bool CrtContext::combine(std::span<const u64> residues, std::span<u64> out) const {
  const std::size_t n = fields_.size();
  const u64 r0 = residues[0];
  if (n == 1) {
    const i64 v = lift_symmetric(r0, fields_[0].spec());
    const u64 ext = v < 0 ? ~u64{0} : 0;
    out[0] = static_cast<u64>(v);
    std::fill(out.begin() + 1, out.end(), ext);
    return true;
  }
  if (n == 2) {
    const auto& f1 = fields_[1];
    const u64 p1 = f1.modulus();
    const u64 r0_1 = r0 < p1 ? r0 : (r0 < 2 * p1 ? r0 - p1 : r0 % p1);
    const u64 t = f1.mul_shoup(f1.sub(residues[1], r0_1), garner_inv_[1], garner_inv_shoup_);
    const u128 x = static_cast<u128>(fields_[0].modulus()) * t + r0;
    const i128 v = x > half2_ ? static_cast<i128>(x - product2_) : static_cast<i128>(x);
    const u64 lo = static_cast<u64>(v);
    const u64 hi = static_cast<u64>(static_cast<u128>(v) >> 64);
    const u64 ext = v < 0 ? ~u64{0} : 0;
    if (out.size() == 1) {
      if (static_cast<i128>(static_cast<i64>(lo)) != v) return false;
      out[0] = lo;
      return true;
    }
    out[0] = lo;
    out[1] = hi;
    std::fill(out.begin() + 2, out.end(), ext);
    return true;
  }

  // General Garner: x = r0 + p0 * (t1 + p1 * (t2 + ...)), built incrementally.
  std::vector<u64> x = {r0};
  std::vector<u64> m = {fields_[0].modulus()};
  for (std::size_t i = 1; i < n; ++i) {
    const auto& f = fields_[i];
    const u64 xi = mod_small(x, f.modulus());
    const u64 t = f.mul(f.sub(residues[i], xi), garner_inv_[i]);
    std::vector<u64> term = m;
    mul_small(term, t);
    x.resize(std::max(x.size(), term.size()) + 1, 0);
    u64 carry = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const u64 a = k < term.size() ? term[k] : 0;
      const u128 s = static_cast<u128>(x[k]) + a + carry;
      x[k] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    mul_small(m, f.modulus());
  }
  while (x.size() > 1 && x.back() == 0) x.pop_back();

  std::vector<u64> v(std::max(x.size(), product_.size()) + 1, 0);
  std::copy(x.begin(), x.end(), v.begin());
  if (compare(x, half_product_) > 0) {
    // v = x - product, negative
    u64 borrow = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const u64 b = k < product_.size() ? product_[k] : 0;
      const u64 d = v[k] - b;
      const u64 b1 = v[k] < b;
      v[k] = d - borrow;
      borrow = b1 | (d < borrow);
    }
  }
  if (!words::fits_in(v, out.size())) return false;
  const u64 ext = words::is_negative(v) ? ~u64{0} : 0;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k < v.size() ? v[k] : ext;
  return true;
}

WideInt crt_combine(std::span<const u64> residues, std::span<const PrimeSpec> primes,
                    std::size_t words) {
  if (residues.size() != primes.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one residue per prime required");
  }
  const CrtContext ctx(primes);
  WideInt out(words);
  if (!ctx.combine(residues, out.words())) {
    throw Error(ErrorCode::kInternalBound, "CRT value does not fit in " + std::to_string(words) + " words");
  }
  return out;
}

}  // namespace cvl
