#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "cvl/oracle.hpp"
#include "cvl/zpoly.hpp"

namespace cvl::test_util {

// Uniform in [-2^(bits-1), 2^(bits-1) - 1].
inline mpz_class random_signed(gmp_randclass& rng, std::size_t bits) {
  mpz_class v = rng.get_z_bits(bits);
  return v - (mpz_class(1) << (bits - 1));
}

inline IntPolynomial polynomial_of(const std::vector<mpz_class>& coeffs) {
  return from_mpz(std::span<const mpz_class>(coeffs));
}

// Every coefficient equal to v.
inline IntPolynomial constant_fill(std::size_t d, const mpz_class& v) {
  return polynomial_of(std::vector<mpz_class>(d, v));
}

inline IntPolynomial add(const IntPolynomial& a, const IntPolynomial& b) {
  auto x = to_mpz(a), y = to_mpz(b);
  if (x.size() < y.size()) x.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
  return polynomial_of(x);
}

}  // namespace cvl::test_util
