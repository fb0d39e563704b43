#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvl/modfield.hpp"
#include "cvl/zpoly.hpp"

namespace cvl {

// Largest digit width the codec supports; digits are held in int64.
inline constexpr std::size_t kMaxDigitBits = 63;

// How N = K * M is split.
//  kBalanced:   K is the largest power of two <= min(d, N_min), M follows;
//               the digit count tracks the degree.
//  kWideDigits: M as large as the prime product allows, K as small as
//               possible; N keeps one bit of headroom over N_min.
enum class BasePolicy { kBalanced, kWideDigits };

struct BaseSplit {
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t M = 0;

  bool operator==(const BaseSplit&) const = default;
};

// All derived parameters of one multiplication.
struct MulPlan {
  std::size_t d = 0;      // max(deg a, deg b) + 1
  std::size_t n_min = 0;  // minimal two's complement width of the inputs
  std::size_t N = 0;      // K * M
  std::size_t K = 0;      // digits per coefficient, power of two
  std::size_t M = 0;      // digit width; beta = 2^M
  unsigned w = kWordBits;
  std::size_t s_y = 0;    // transform length along y, >= 2d - 1
  std::vector<PrimeSpec> primes;
  std::size_t e = 0;      // words per convolution coefficient
  std::size_t f = 0;      // words per u_i / v_i accumulator
  BasePolicy policy = BasePolicy::kWideDigits;

  std::size_t beta_log2() const { return M; }
  std::size_t rows_out() const { return 2 * d - 1; }
};

struct FermatPrimeEntry {
  u64 base = 0;
  unsigned exponent = 0;
  unsigned two_adic_valuation = 0;
};

// Smallest N such that every coefficient of a and b lies in
// [-2^(N-1), 2^(N-1) - 1].
std::size_t min_coefficient_bits(const IntPolynomial& a, const IntPolynomial& b);

// (N, K, M) for the pair (a, b) under the balanced rule. Throws kEmptyInput
// when either polynomial is zero.
BaseSplit determine_base(const IntPolynomial& a, const IntPolynomial& b, unsigned w = kWordBits);

// Size-only form. With prime_count > 0 the split is also adjusted until the
// prime product bound holds for that many table primes.
BaseSplit determine_base(std::size_t d, std::size_t n_min, BasePolicy policy,
                         unsigned prime_count = 0);

// Least power of two >= 2d - 1.
std::size_t y_transform_length(std::size_t d);

// Whether prod(primes) > 4 * d * K * 2^(2M).
bool prime_product_exceeds_bound(std::span<const PrimeSpec> primes, std::size_t d, std::size_t K,
                                 std::size_t M);

// `count` distinct table primes, largest first, each with 2^k >= max(2K, s_y)
// and jointly above the coefficient bound.
std::vector<PrimeSpec> recovery_primes(std::size_t d, std::size_t K, std::size_t M, unsigned count);

MulPlan make_plan(std::size_t d, std::size_t n_min, const BaseSplit& split, unsigned prime_count,
                  BasePolicy policy = BasePolicy::kWideDigits);
MulPlan make_plan(std::size_t d, std::size_t n_min, unsigned prime_count, BasePolicy policy);
MulPlan plan_multiplication(const IntPolynomial& a, const IntPolynomial& b, unsigned prime_count,
                            BasePolicy policy = BasePolicy::kWideDigits);

// The bundled Fourier prime table, sorted by decreasing p.
std::span<const PrimeSpec> prime_table();
std::vector<PrimeSpec> parse_prime_table(std::string_view text);
std::string format_prime_table(std::span<const PrimeSpec> primes);
// Exhaustive search used to build the bundled resource.
std::vector<PrimeSpec> generate_prime_table(unsigned k_min, unsigned k_max, std::size_t per_exponent);

// Generalized Fermat primes base^exponent + 1 of practical interest. Stored
// constants only; no arithmetic is done in these fields.
std::span<const FermatPrimeEntry> fermat_prime_table();

std::string to_string(const MulPlan& plan);

}  // namespace cvl
