#pragma once

// Reference implementations on GMP integers. Nothing here touches the
// fixed-width WideInt arithmetic used by the pipeline.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

#include "cvl/codec.hpp"
#include "cvl/zpoly.hpp"

namespace cvl {

enum class Fold { kNone, kCyclic, kNegacyclic };

struct BigGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<mpz_class> values;

  const mpz_class& at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  mpz_class& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

inline constexpr std::size_t kNaiveOracleCap = 16;

IntPolynomial schoolbook_multiply(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial kronecker_multiply(const IntPolynomial& a, const IntPolynomial& b);

// c_{i,j} = sum a_{l,k} b_{m,h} over l + m = i, k + h = j. kNone keeps
// 2K - 1 columns; the folds reduce mod x^K - 1 or x^K + 1. Refuses d or K
// above kNaiveOracleCap.
BigGrid naive_bivariate_convolution(const DigitMatrix& a, const DigitMatrix& b, Fold fold);

mpz_class to_mpz(std::span<const u64> coeff);
std::vector<mpz_class> to_mpz(const IntPolynomial& p);
IntPolynomial from_mpz(std::span<const mpz_class> coeffs);

}  // namespace cvl
