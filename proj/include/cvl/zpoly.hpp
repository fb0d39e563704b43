#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvl {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr unsigned kWordBits = 64;

constexpr std::size_t words_for_bits(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

// Signed fixed-width integer: little-endian words, two's complement.
class WideInt {
 public:
  WideInt() = default;
  explicit WideInt(std::size_t words) : words_(words, 0) {}
  WideInt(std::size_t words, i64 value);
  static WideInt from_words(std::span<const u64> words) {
    WideInt w;
    w.words_.assign(words.begin(), words.end());
    return w;
  }

  std::size_t size() const { return words_.size(); }
  std::span<u64> words() { return words_; }
  std::span<const u64> words() const { return words_; }
  bool negative() const { return !words_.empty() && (words_.back() >> 63) != 0; }
  bool is_zero() const;

  // Copy with a different word count; sign-extends or truncates.
  WideInt resized(std::size_t words) const;

  bool operator==(const WideInt& other) const;

 private:
  std::vector<u64> words_;
};

// acc + sign * value * 2^shift, exact in the word count of acc.
// Throws kInternalBound when shift + bit width of value exceeds acc.
WideInt wide_add_shifted(const WideInt& acc, const WideInt& value, std::size_t shift, int sign);

// Arithmetic right shift by one; throws kParityViolation on odd input.
WideInt wide_halve(const WideInt& x);

namespace words {

// In-place forms used by the hot paths. All spans are two's complement.
void add_shifted(std::span<u64> acc, std::span<const u64> value, std::size_t shift, int sign);
bool is_negative(std::span<const u64> x);
void negate(std::span<u64> x);
// Arithmetic shift right by one; returns the bit shifted out.
unsigned halve(std::span<u64> x);
// True when x sign-extends from its lowest `keep` words.
bool fits_in(std::span<const u64> x, std::size_t keep);
// Smallest N such that x lies in [-2^(N-1), 2^(N-1) - 1]; zero gives 1.
std::size_t signed_bit_width(std::span<const u64> x);
// Bits [lo, lo + len) of the infinite sign extension of x, len <= 64.
u64 extract_bits(std::span<const u64> x, std::size_t lo, unsigned len);

}  // namespace words

// Dense polynomial over Z. Coefficient i occupies words
// [i * coeff_words, (i + 1) * coeff_words), little-endian, two's complement.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  IntPolynomial(std::size_t length, std::size_t coeff_words)
      : length_(length), coeff_words_(coeff_words), words_(length * coeff_words, 0) {}

  static IntPolynomial from_int64(std::span<const i64> coeffs);
  static IntPolynomial from_int64(std::initializer_list<i64> coeffs) {
    return from_int64(std::span<const i64>(coeffs.begin(), coeffs.size()));
  }

  // Number of stored coefficients, d = degree + 1 (leading zeros allowed).
  std::size_t length() const { return length_; }
  std::size_t coeff_words() const { return coeff_words_; }

  std::span<u64> coeff(std::size_t i) {
    return {words_.data() + i * coeff_words_, coeff_words_};
  }
  std::span<const u64> coeff(std::size_t i) const {
    return {words_.data() + i * coeff_words_, coeff_words_};
  }
  std::span<const u64> raw_words() const { return words_; }

  // Max over coefficients of the minimal two's complement width.
  std::size_t bit_width() const;
  bool is_zero() const;

  // Same values stored with the fewest words per coefficient.
  IntPolynomial normalized() const;
  IntPolynomial with_coeff_words(std::size_t coeff_words) const;

  // Value equality, independent of coeff_words.
  bool operator==(const IntPolynomial& other) const;

 private:
  std::size_t length_ = 0;
  std::size_t coeff_words_ = 0;
  std::vector<u64> words_;
};

// Text format: "d=<count>" then one signed decimal integer per line, degree
// ascending. Blank lines and lines starting with '#' are ignored.
IntPolynomial parse_polynomial(std::istream& in);
IntPolynomial parse_polynomial(std::string_view text);
void format_polynomial(const IntPolynomial& poly, std::ostream& out);
std::string format_polynomial(const IntPolynomial& poly);

IntPolynomial read_polynomial_file(const std::string& path);
void write_polynomial_file(const IntPolynomial& poly, const std::string& path);

std::string coefficient_to_decimal(std::span<const u64> coeff);
// Index of the first differing coefficient (by value), or -1 when equal.
std::ptrdiff_t first_difference(const IntPolynomial& a, const IntPolynomial& b);

// 64-bit FNV-1a over the normalized coefficient words and the length.
u64 polynomial_hash(const IntPolynomial& poly);

}  // namespace cvl
