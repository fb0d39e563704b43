#include "cvl/oracle.hpp"

#include <algorithm>
#include <bit>

#include "cvl/error.hpp"
#include "gmp_bridge.hpp"

namespace cvl {

namespace {

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

// ORs the len-bit value src into dst at bit offset lo.
void or_bits(std::vector<u64>& dst, std::size_t lo, std::span<const u64> src) {
  const std::size_t wi = lo / 64;
  const unsigned b = lo % 64;
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[wi + k] |= src[k] << b;
    if (b != 0 && src[k] >> (64 - b) != 0) dst[wi + k + 1] |= src[k] >> (64 - b);
  }
}

// Bits [lo, lo + len) of src as an unsigned integer.
mpz_class slice(std::span<const u64> src, std::size_t lo, std::size_t len, std::vector<u64>& scratch) {
  const std::size_t n = (len + 63) / 64;
  scratch.assign(n, 0);
  const std::size_t wi = lo / 64;
  const unsigned b = lo % 64;
  for (std::size_t k = 0; k < n; ++k) {
    const u64 w0 = wi + k < src.size() ? src[wi + k] : 0;
    const u64 w1 = wi + k + 1 < src.size() ? src[wi + k + 1] : 0;
    scratch[k] = b == 0 ? w0 : (w0 >> b) | (w1 << (64 - b));
  }
  if (len % 64 != 0) scratch[n - 1] &= (u64{1} << (len % 64)) - 1;
  mpz_class out;
  mpz_import(out.get_mpz_t(), n, -1, sizeof(u64), 0, 0, scratch.data());
  return out;
}

std::vector<u64> export_magnitude(const mpz_class& v) {
  std::vector<u64> out((mpz_sizeinbase(v.get_mpz_t(), 2) + 63) / 64 + 1, 0);
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(u64), 0, 0, v.get_mpz_t());
  out.resize(count);
  return out;
}

mpz_class pack(const std::vector<mpz_class>& coeffs, std::size_t slot) {
  const std::size_t words = (coeffs.size() * slot + 63) / 64 + 2;
  std::vector<u64> pos(words, 0), neg(words, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int s = sgn(coeffs[i]);
    if (s == 0) continue;
    or_bits(s > 0 ? pos : neg, i * slot, export_magnitude(coeffs[i]));
  }
  mpz_class p, n;
  mpz_import(p.get_mpz_t(), words, -1, sizeof(u64), 0, 0, pos.data());
  mpz_import(n.get_mpz_t(), words, -1, sizeof(u64), 0, 0, neg.data());
  return p - n;
}

}  // namespace

mpz_class to_mpz(std::span<const u64> coeff) { return gmp::from_words(coeff); }

std::vector<mpz_class> to_mpz(const IntPolynomial& p) {
  std::vector<mpz_class> out(p.length());
  for (std::size_t i = 0; i < p.length(); ++i) out[i] = gmp::from_words(p.coeff(i));
  return out;
}

IntPolynomial from_mpz(std::span<const mpz_class> coeffs) {
  std::size_t words = 1;
  for (const auto& c : coeffs) words = std::max(words, gmp::words_needed(c));
  IntPolynomial out(coeffs.size(), words);
  for (std::size_t i = 0; i < coeffs.size(); ++i) gmp::to_words(coeffs[i], out.coeff(i));
  return out;
}

IntPolynomial schoolbook_multiply(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.length() == 0 || b.length() == 0) throw Error(ErrorCode::kEmptyInput, "empty polynomial");
  const auto x = to_mpz(a);
  const auto y = to_mpz(b);
  std::vector<mpz_class> c(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      mpz_addmul(c[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
    }
  }
  return from_mpz(c);
}

IntPolynomial kronecker_multiply(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.length() == 0 || b.length() == 0) throw Error(ErrorCode::kEmptyInput, "empty polynomial");
  const auto x = to_mpz(a);
  const auto y = to_mpz(b);
  std::size_t n_bits = 1;
  for (const auto* v : {&x, &y}) {
    for (const auto& c : *v) {
      if (sgn(c) != 0) n_bits = std::max(n_bits, mpz_sizeinbase(c.get_mpz_t(), 2) + 1);
    }
  }
  const std::size_t d = std::max(x.size(), y.size());
  const std::size_t slot = 2 * n_bits + ceil_log2(d) + 1;
  const std::size_t len = x.size() + y.size() - 1;

  mpz_class prod = pack(x, slot) * pack(y, slot);

  // Two's complement image of the product, then balanced slot decoding.
  const std::size_t total_words = (len * slot + 63) / 64 + 1;
  if (sgn(prod) < 0) {
    mpz_class modulus;
    mpz_setbit(modulus.get_mpz_t(), total_words * 64);
    prod += modulus;
  }
  std::vector<u64> image(total_words, 0);
  std::size_t count = 0;
  mpz_export(image.data(), &count, -1, sizeof(u64), 0, 0, prod.get_mpz_t());
  prod = 0;

  mpz_class half, full;
  mpz_setbit(half.get_mpz_t(), slot - 1);
  mpz_setbit(full.get_mpz_t(), slot);
  std::vector<mpz_class> c(len);
  std::vector<u64> scratch;
  int carry = 0;
  for (std::size_t i = 0; i < len; ++i) {
    mpz_class s = slice(image, i * slot, slot, scratch);
    if (carry) s += 1;
    if (s >= half) {
      s -= full;
      carry = 1;
    } else {
      carry = 0;
    }
    c[i] = std::move(s);
  }
  return from_mpz(c);
}

BigGrid naive_bivariate_convolution(const DigitMatrix& a, const DigitMatrix& b, Fold fold) {
  if (a.K != b.K) throw Error(ErrorCode::kDimensionMismatch, "digit matrices must share K");
  if (a.d > kNaiveOracleCap || b.d > kNaiveOracleCap || a.K > kNaiveOracleCap) {
    throw Error(ErrorCode::kInvalidArgument, "naive bivariate oracle is capped at d, K <= 16");
  }
  const std::size_t K = a.K;
  BigGrid out;
  out.rows = a.d + b.d - 1;
  out.cols = fold == Fold::kNone ? 2 * K - 1 : K;
  out.values.assign(out.rows * out.cols, 0);
  for (std::size_t l = 0; l < a.d; ++l) {
    for (std::size_t m = 0; m < b.d; ++m) {
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t h = 0; h < K; ++h) {
          const mpz_class t = mpz_class(a.at(l, k)) * mpz_class(b.at(m, h));
          std::size_t j = k + h;
          if (fold == Fold::kNone || j < K) {
            out.at(l + m, j) += t;
          } else if (fold == Fold::kCyclic) {
            out.at(l + m, j - K) += t;
          } else {
            out.at(l + m, j - K) -= t;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace cvl
