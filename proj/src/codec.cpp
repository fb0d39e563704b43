#include "cvl/codec.hpp"

#include <algorithm>
#include <bit>

#include "cvl/error.hpp"
#include "cvl/parallel.hpp"

namespace cvl {

void balanced_digits(std::span<const u64> coeff, std::size_t K, std::size_t M, std::span<i64> out) {
  if (words::signed_bit_width(coeff) > K * M) {
    throw Error(ErrorCode::kEncoding, "coefficient wider than N=" + std::to_string(K * M) + " bits");
  }
  const u64 radix = u64{1} << M;
  const u64 half = radix >> 1;
  u64 carry = 0;
  for (std::size_t j = 0; j + 1 < K; ++j) {
    const u64 v = words::extract_bits(coeff, M * j, static_cast<unsigned>(M)) + carry;
    if (v >= half) {
      out[j] = -static_cast<i64>(radix - v);
      carry = 1;
    } else {
      out[j] = static_cast<i64>(v);
      carry = 0;
    }
  }
  const u64 top = words::extract_bits(coeff, M * (K - 1), static_cast<unsigned>(M));
  const i64 top_signed = top >= half ? -static_cast<i64>(radix - top) : static_cast<i64>(top);
  out[K - 1] = top_signed + static_cast<i64>(carry);
}

DigitMatrix bivariate_representation(const IntPolynomial& a, const MulPlan& plan, unsigned workers) {
  if (a.length() > plan.d) {
    throw Error(ErrorCode::kDimensionMismatch, "polynomial longer than plan d");
  }
  DigitMatrix out{plan.d, plan.K, plan.M, std::vector<i64>(plan.d * plan.K, 0)};
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (a.length() + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(a.length(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      balanced_digits(a.coeff(i), plan.K, plan.M, {out.digits.data() + i * plan.K, plan.K});
    }
  });
  return out;
}

ConvolutionResult fold_to_c_plus_minus(std::span<const WideInt> full, std::size_t rows, std::size_t K,
                                       std::size_t e) {
  const std::size_t cols = 2 * K - 1;
  if (full.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "full product must be rows x (2K - 1)");
  }
  ConvolutionResult out(rows, K, e);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      const WideInt low = full[i * cols + j].resized(e);
      const WideInt high = j + K < cols ? full[i * cols + j + K].resized(e) : WideInt(e);
      const WideInt plus = wide_add_shifted(low, high, 0, -1);
      const WideInt minus = wide_add_shifted(low, high, 0, +1);
      std::copy(plus.words().begin(), plus.words().end(), out.plus(i, j).begin());
      std::copy(minus.words().begin(), minus.words().end(), out.minus(i, j).begin());
    }
  }
  return out;
}

namespace {

// Reference form: every entry is added as its unsigned word pattern; a
// negative entry over-counts by 2^(64e + M j), collected in `borrow` and
// subtracted at the end. Those bits never collide.
void evaluate_at_beta_general(std::span<const u64> entries, std::size_t K, std::size_t e, std::size_t M,
                              std::span<u64> acc) {
  std::fill(acc.begin(), acc.end(), 0);
  const std::size_t n = acc.size();
  if (e * kWordBits + M * (K - 1) >= n * kWordBits) {
    throw Error(ErrorCode::kInternalBound, "accumulator too small for evaluation at beta");
  }
  std::vector<u64> borrow(n, 0);
  for (std::size_t j = 0; j < K; ++j) {
    const u64* v = entries.data() + j * e;
    const std::size_t shift = M * j;
    const std::size_t wi = shift / kWordBits;
    const unsigned b = shift % kWordBits;
    u64 carry = 0;
    std::size_t k = 0;
    for (; k <= e; ++k) {
      u64 word;
      if (b == 0) {
        if (k == e) break;
        word = v[k];
      } else {
        word = (k < e ? v[k] << b : 0) | (k > 0 ? v[k - 1] >> (kWordBits - b) : 0);
      }
      const u128 s = static_cast<u128>(acc[wi + k]) + word + carry;
      acc[wi + k] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    for (std::size_t t = wi + k; carry != 0 && t < n; ++t) {
      acc[t] += 1;
      carry = acc[t] == 0 ? 1 : 0;
    }
    if ((v[e - 1] >> 63) != 0) {
      const std::size_t pos = e * kWordBits + shift;
      borrow[pos / kWordBits] |= u64{1} << (pos % kWordBits);
    }
  }
  u64 br = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const u64 x = acc[t];
    const u64 y = borrow[t];
    const u64 d = x - y;
    const u64 b1 = x < y;
    acc[t] = d - br;
    br = b1 | (d < br);
  }
}

// For M < 64: a window of e + 2 signed words slides up the accumulator and
// finished low words are written out as soon as no later entry can reach
// them.
template <std::size_t E>
void evaluate_at_beta_window(std::span<const u64> entries, std::size_t K, std::size_t M, std::span<u64> acc) {
  constexpr std::size_t e = E;
  constexpr std::size_t ww = E + 2;
  const std::size_t n = acc.size();
  u64 win[ww] = {};
  std::size_t base = 0;
  for (std::size_t j = 0; j < K; ++j) {
    const std::size_t o = M * j;
    while (o >= (base + 1) * kWordBits) {
      if (base >= n) throw Error(ErrorCode::kInternalBound, "accumulator too small for evaluation at beta");
      acc[base++] = win[0];
      for (std::size_t i = 0; i + 1 < ww; ++i) win[i] = win[i + 1];
      win[ww - 1] = static_cast<u64>(static_cast<i64>(win[ww - 1]) >> 63);
    }
    const unsigned s = static_cast<unsigned>(o - base * kWordBits);
    const u64* v = entries.data() + j * e;
    const u64 ext = static_cast<u64>(static_cast<i64>(v[e - 1]) >> 63);
    u64 carry = 0;
    u64 prev = 0;
    for (std::size_t i = 0; i < ww; ++i) {
      const u64 cur = i < e ? v[i] : ext;
      const u64 word = s == 0 ? cur : (cur << s) | (prev >> (kWordBits - s));
      prev = cur;
      const u128 sum = static_cast<u128>(win[i]) + word + carry;
      win[i] = static_cast<u64>(sum);
      carry = static_cast<u64>(sum >> 64);
    }
  }
  const u64 ext = static_cast<u64>(static_cast<i64>(win[ww - 1]) >> 63);
  for (std::size_t i = 0; i < ww; ++i, ++base) {
    if (base < n) {
      acc[base] = win[i];
    } else if (win[i] != ext || (n > 0 && static_cast<u64>(static_cast<i64>(acc[n - 1]) >> 63) != ext)) {
      throw Error(ErrorCode::kInternalBound, "accumulator too small for evaluation at beta");
    }
  }
  for (; base < n; ++base) acc[base] = ext;
}

}  // namespace

void evaluate_at_beta(std::span<const u64> entries, std::size_t K, std::size_t e, std::size_t M,
                      std::span<u64> acc) {
  if (M >= 1 && M < kWordBits && !acc.empty()) {
    switch (e) {
      case 1: return evaluate_at_beta_window<1>(entries, K, M, acc);
      case 2: return evaluate_at_beta_window<2>(entries, K, M, acc);
      case 3: return evaluate_at_beta_window<3>(entries, K, M, acc);
      case 4: return evaluate_at_beta_window<4>(entries, K, M, acc);
      default: break;
    }
  }
  evaluate_at_beta_general(entries, K, e, M, acc);
}

std::size_t product_coeff_words(const MulPlan& plan) {
  const std::size_t log_d = plan.d <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(plan.d - 1));
  return words_for_bits(2 * plan.N + log_d);
}

IntPolynomial recover_product(const ConvolutionResult& result, const MulPlan& plan, unsigned workers) {
  if (result.rows != plan.rows_out() || result.K != plan.K || result.e != plan.e) {
    throw Error(ErrorCode::kDimensionMismatch, "convolution result does not match plan");
  }
  const std::size_t out_words = product_coeff_words(plan);
  const std::size_t acc_words = plan.f + 1;
  const std::size_t sum_words = acc_words + 1;
  const std::size_t shift_words = plan.N / kWordBits;
  const unsigned shift_bits = static_cast<unsigned>(plan.N % kWordBits);
  const std::size_t work_words = std::max(sum_words, out_words) + shift_words + 2;
  IntPolynomial out(result.rows, out_words);

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (result.rows + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<u64> u(acc_words), v(acc_words), s(sum_words), t(sum_words), c_i(work_words);
    const std::size_t end = std::min(result.rows, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const std::size_t row = i * result.K * result.e;
      const std::size_t len = result.K * result.e;
      evaluate_at_beta({result.c_plus.data() + row, len}, result.K, result.e, plan.M, u);
      evaluate_at_beta({result.c_minus.data() + row, len}, result.K, result.e, plan.M, v);

      // s = u + v, t = v - u, both exact in one more word.
      const u64 eu = static_cast<u64>(static_cast<i64>(u[acc_words - 1]) >> 63);
      const u64 ev = static_cast<u64>(static_cast<i64>(v[acc_words - 1]) >> 63);
      u64 carry = 0, borrow = 0;
      for (std::size_t k = 0; k < sum_words; ++k) {
        const u64 uk = k < acc_words ? u[k] : eu;
        const u64 vk = k < acc_words ? v[k] : ev;
        const u128 sum = static_cast<u128>(uk) + vk + carry;
        s[k] = static_cast<u64>(sum);
        carry = static_cast<u64>(sum >> 64);
        const u128 diff = static_cast<u128>(vk) - uk - borrow;
        t[k] = static_cast<u64>(diff);
        borrow = static_cast<u64>(diff >> 64) & 1;
      }
      if (((s[0] | t[0]) & 1) != 0) {
        throw Error(ErrorCode::kCorruptedConvolution,
                    "odd u_i + v_i at degree " + std::to_string(i) + " (parity violation)");
      }
      words::halve(s);
      words::halve(t);

      // c_i = s + t * 2^N
      const u64 es = static_cast<u64>(static_cast<i64>(s[sum_words - 1]) >> 63);
      const u64 et = static_cast<u64>(static_cast<i64>(t[sum_words - 1]) >> 63);
      carry = 0;
      for (std::size_t k = 0; k < work_words; ++k) {
        const u64 sk = k < sum_words ? s[k] : es;
        u64 tk = 0;
        if (k >= shift_words) {
          const std::size_t q = k - shift_words;
          const u64 hi = q < sum_words ? t[q] : et;
          if (shift_bits == 0) {
            tk = hi;
          } else {
            const u64 lo = q == 0 ? 0 : (q - 1 < sum_words ? t[q - 1] : et);
            tk = (hi << shift_bits) | (lo >> (kWordBits - shift_bits));
          }
        }
        const u128 sum = static_cast<u128>(sk) + tk + carry;
        c_i[k] = static_cast<u64>(sum);
        carry = static_cast<u64>(sum >> 64);
      }
      if (!words::fits_in(c_i, out_words)) {
        throw Error(ErrorCode::kInternalBound,
                    "c_" + std::to_string(i) + " exceeds the d 2^(2N-2) bound");
      }
      std::copy_n(c_i.begin(), out_words, out.coeff(i).begin());
    }
  });
  return out;
}

}  // namespace cvl
