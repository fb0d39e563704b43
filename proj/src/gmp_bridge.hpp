#pragma once

// Conversions between two's complement word spans and GMP integers. Shared by
// the text I/O in zpoly and by the oracle module. Only GMP arithmetic is used
// here, none of the WideInt helpers.

#include <gmpxx.h>

#include <span>

#include "cvl/zpoly.hpp"

namespace cvl::gmp {

inline mpz_class from_words(std::span<const u64> x) {
  mpz_class out;
  if (x.empty()) return out;
  mpz_import(out.get_mpz_t(), x.size(), -1, sizeof(u64), 0, 0, x.data());
  if ((x.back() >> 63) != 0) {
    mpz_class modulus;
    mpz_setbit(modulus.get_mpz_t(), x.size() * kWordBits);
    out -= modulus;
  }
  return out;
}

// Number of words needed to hold v in two's complement.
inline std::size_t words_needed(const mpz_class& v) {
  if (sgn(v) == 0) return 1;
  // Signed width: bits of |v| plus a sign bit; -2^k needs only k + 1.
  std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2) + 1;
  if (sgn(v) < 0) {
    const mpz_class m = -v;
    if (mpz_popcount(m.get_mpz_t()) == 1) bits -= 1;
  }
  return words_for_bits(bits);
}

// Writes v into out (two's complement); returns false if it does not fit.
inline bool to_words(const mpz_class& v, std::span<u64> out) {
  if (words_needed(v) > out.size()) return false;
  std::fill(out.begin(), out.end(), 0);
  mpz_class u = v;
  if (sgn(v) < 0) {
    mpz_class modulus;
    mpz_setbit(modulus.get_mpz_t(), out.size() * kWordBits);
    u += modulus;
  }
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(u64), 0, 0, u.get_mpz_t());
  return true;
}

}  // namespace cvl::gmp
