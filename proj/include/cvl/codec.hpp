#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cvl/grid.hpp"
#include "cvl/params.hpp"
#include "cvl/zpoly.hpp"

namespace cvl {

// A(x, y) as a d x K matrix of signed base-2^M digits, row-major: digit
// (i, j) is the coefficient of x^j y^i. Row i evaluated at x = 2^M gives a_i.
struct DigitMatrix {
  std::size_t d = 0;
  std::size_t K = 0;
  std::size_t M = 0;
  std::vector<i64> digits;

  i64 at(std::size_t i, std::size_t j) const { return digits[i * K + j]; }
  i64& at(std::size_t i, std::size_t j) { return digits[i * K + j]; }
  std::span<const i64> row(std::size_t i) const { return {digits.data() + i * K, K}; }
};

// C+ (product mod x^K + 1) and C- (product mod x^K - 1) over Z, each a
// rows x K array of e-word signed integers; entry (i, j) starts at word
// (K * i + j) * e.
struct ConvolutionResult {
  std::size_t rows = 0;
  std::size_t K = 0;
  std::size_t e = 0;
  GridStorage c_plus;
  GridStorage c_minus;

  ConvolutionResult() = default;
  ConvolutionResult(std::size_t rows_, std::size_t K_, std::size_t e_)
      : rows(rows_), K(K_), e(e_), c_plus(rows_ * K_ * e_, 0), c_minus(rows_ * K_ * e_, 0) {}

  std::span<u64> plus(std::size_t i, std::size_t j) { return {c_plus.data() + (K * i + j) * e, e}; }
  std::span<u64> minus(std::size_t i, std::size_t j) { return {c_minus.data() + (K * i + j) * e, e}; }
  std::span<const u64> plus(std::size_t i, std::size_t j) const {
    return {c_plus.data() + (K * i + j) * e, e};
  }
  std::span<const u64> minus(std::size_t i, std::size_t j) const {
    return {c_minus.data() + (K * i + j) * e, e};
  }
};

// Balanced digits of one coefficient: digits [0, K-1) lie in
// [-2^(M-1), 2^(M-1) - 1]; the top digit absorbs the final carry and lies in
// [-2^(M-1), 2^(M-1)]. It only reaches +2^(M-1) when the coefficient is
// above the strict K-digit capacity, which needs N = N_min exactly.
// Throws kEncoding when the coefficient is wider than K * M bits.
void balanced_digits(std::span<const u64> coeff, std::size_t K, std::size_t M, std::span<i64> out);

DigitMatrix bivariate_representation(const IntPolynomial& a, const MulPlan& plan, unsigned workers = 1);

// Folds a full product row set (rows x (2K - 1), row-major) into C+ / C-;
// c_{i,2K-1} is taken as zero. Test-side oracle helper.
ConvolutionResult fold_to_c_plus_minus(std::span<const WideInt> full, std::size_t rows, std::size_t K,
                                       std::size_t e);

// sum_j entries[j] * 2^(M j) for K signed e-word entries, into acc
// (two's complement, at least ceil(M (K - 1) / 64) + e + 1 words).
void evaluate_at_beta(std::span<const u64> entries, std::size_t K, std::size_t e, std::size_t M,
                      std::span<u64> acc);

// Words per output coefficient under the tight bound |c_i| <= d 2^(2N-2).
std::size_t product_coeff_words(const MulPlan& plan);

// c_i = (u_i + v_i) / 2 + 2^N (v_i - u_i) / 2 with u = C+(2^M, y), v = C-(2^M, y).
IntPolynomial recover_product(const ConvolutionResult& result, const MulPlan& plan, unsigned workers = 1);

}  // namespace cvl
