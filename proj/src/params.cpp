#include "cvl/params.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <sstream>

#include "cvl/error.hpp"

namespace cvl {

namespace detail {
extern const char* const kPrimeTableText;
}

namespace {

constexpr std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t ceil_log2(std::size_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

enum class Selection { kOk, kNoTransform, kNoCapacity };

Selection select_primes(std::size_t d, std::size_t K, std::size_t M, unsigned count,
                        std::vector<PrimeSpec>& out) {
  out.clear();
  const std::size_t need = std::max<std::size_t>(2 * K, y_transform_length(d));
  for (const auto& p : prime_table()) {
    if (p.k < 64 && (std::size_t{1} << p.k) >= need) {
      out.push_back(p);
      if (out.size() == count) break;
    }
  }
  if (out.size() < count) return Selection::kNoTransform;
  return prime_product_exceeds_bound(out, d, K, M) ? Selection::kOk : Selection::kNoCapacity;
}

BaseSplit balanced_split(std::size_t d, std::size_t n_min) {
  std::size_t K = std::max<std::size_t>(std::bit_floor(std::min(d, n_min)), 2);
  std::size_t M = ceil_div(n_min, K);
  if (M == 1) {
    // K = N is not allowed; split one level coarser.
    if (K > 2) K /= 2;
    M = std::max<std::size_t>(ceil_div(n_min, K), 2);
  }
  while (M > kMaxDigitBits) {
    K *= 2;
    M = ceil_div(n_min, K);
  }
  return {K * M, K, M};
}

}  // namespace

std::size_t min_coefficient_bits(const IntPolynomial& a, const IntPolynomial& b) {
  return std::max(a.bit_width(), b.bit_width());
}

std::size_t y_transform_length(std::size_t d) {
  return std::bit_ceil(std::max<std::size_t>(2 * d, 2) - 1);
}

bool prime_product_exceeds_bound(std::span<const PrimeSpec> primes, std::size_t d, std::size_t K,
                                 std::size_t M) {
  // product of primes, little-endian words
  std::vector<u64> prod = {1};
  for (const auto& p : primes) {
    u64 carry = 0;
    for (auto& w : prod) {
      const u128 t = static_cast<u128>(w) * p.p + carry;
      w = static_cast<u64>(t);
      carry = static_cast<u64>(t >> 64);
    }
    if (carry) prod.push_back(carry);
  }
  // bound = d * K * 2^(2M + 2)
  const u128 dk = static_cast<u128>(d) * K;
  const std::size_t shift = 2 * M + 2;
  std::vector<u64> bound(shift / 64 + 4, 0);
  WideInt dk_words(3);
  dk_words.words()[0] = static_cast<u64>(dk);
  dk_words.words()[1] = static_cast<u64>(dk >> 64);
  words::add_shifted(bound, dk_words.words(), shift, +1);

  const std::size_t n = std::max(prod.size(), bound.size());
  for (std::size_t i = n; i-- > 0;) {
    const u64 x = i < prod.size() ? prod[i] : 0;
    const u64 y = i < bound.size() ? bound[i] : 0;
    if (x != y) return x > y;
  }
  return false;
}

BaseSplit determine_base(const IntPolynomial& a, const IntPolynomial& b, unsigned w) {
  if (w != kWordBits) throw Error(ErrorCode::kInvalidArgument, "only 64-bit words are supported");
  if (a.length() == 0 || b.length() == 0 || a.is_zero() || b.is_zero()) {
    throw Error(ErrorCode::kEmptyInput, "zero polynomial has no degree");
  }
  return balanced_split(std::max(a.length(), b.length()), min_coefficient_bits(a, b));
}

BaseSplit determine_base(std::size_t d, std::size_t n_min, BasePolicy policy, unsigned prime_count) {
  if (d == 0 || n_min == 0) throw Error(ErrorCode::kEmptyInput, "d and N_min must be positive");
  std::vector<PrimeSpec> primes;

  if (policy == BasePolicy::kBalanced) {
    BaseSplit s = balanced_split(d, n_min);
    if (prime_count == 0) return s;
    for (;;) {
      switch (select_primes(d, s.K, s.M, prime_count, primes)) {
        case Selection::kOk: return s;
        case Selection::kNoTransform:
          throw Error(ErrorCode::kTransformLengthUnsupported, "no prime supports the transform sizes");
        case Selection::kNoCapacity: break;
      }
      const std::size_t K = s.K * 2;
      const std::size_t M = ceil_div(n_min, K);
      if (M < 2) {
        throw Error(ErrorCode::kBoundExceedsPrimeCapacity,
                    "no balanced split fits " + std::to_string(prime_count) + " primes");
      }
      s = {K * M, K, M};
    }
  }

  if (prime_count == 0) prime_count = 2;
  for (std::size_t K = 2;; K *= 2) {
    const std::size_t M = std::max<std::size_t>(ceil_div(n_min + 1, K), 2);
    if (M > kMaxDigitBits) continue;
    switch (select_primes(d, K, M, prime_count, primes)) {
      case Selection::kOk: return {K * M, K, M};
      case Selection::kNoTransform:
        throw Error(ErrorCode::kTransformLengthUnsupported, "no prime supports the transform sizes");
      case Selection::kNoCapacity:
        if (M == 2) {
          throw Error(ErrorCode::kBoundExceedsPrimeCapacity,
                      "d=" + std::to_string(d) + " too large for " + std::to_string(prime_count) +
                          " primes");
        }
        break;
    }
  }
}

std::vector<PrimeSpec> recovery_primes(std::size_t d, std::size_t K, std::size_t M, unsigned count) {
  if (count < 1 || count > 3) throw Error(ErrorCode::kInvalidArgument, "prime count must be 1, 2 or 3");
  std::vector<PrimeSpec> out;
  switch (select_primes(d, K, M, count, out)) {
    case Selection::kOk: return out;
    case Selection::kNoTransform:
      throw Error(ErrorCode::kTransformLengthUnsupported,
                  "no table prime has 2^k >= max(2K, s_y) for K=" + std::to_string(K) +
                      ", d=" + std::to_string(d));
    case Selection::kNoCapacity:
      break;
  }
  throw Error(ErrorCode::kBoundExceedsPrimeCapacity,
              "4*d*K*2^(2M) with d=" + std::to_string(d) + ", K=" + std::to_string(K) +
                  ", M=" + std::to_string(M) + " exceeds the product of " + std::to_string(count) +
                  " primes");
}

MulPlan make_plan(std::size_t d, std::size_t n_min, const BaseSplit& split, unsigned prime_count,
                  BasePolicy policy) {
  if (split.K < 2 || !std::has_single_bit(split.K) || split.M == 0 || split.N != split.K * split.M ||
      split.M > kMaxDigitBits || split.N < n_min) {
    throw Error(ErrorCode::kInvalidArgument, "inadmissible split N=" + std::to_string(split.N) +
                                                 " K=" + std::to_string(split.K) +
                                                 " M=" + std::to_string(split.M));
  }
  MulPlan plan;
  plan.d = d;
  plan.n_min = n_min;
  plan.N = split.N;
  plan.K = split.K;
  plan.M = split.M;
  plan.s_y = y_transform_length(d);
  plan.primes = recovery_primes(d, split.K, split.M, prime_count);
  plan.e = ceil_div(2 + ceil_log2(d * split.K) + 2 * split.M, kWordBits);
  plan.f = ceil_div(split.N, kWordBits) + plan.e;
  plan.policy = policy;
  return plan;
}

MulPlan make_plan(std::size_t d, std::size_t n_min, unsigned prime_count, BasePolicy policy) {
  return make_plan(d, n_min, determine_base(d, n_min, policy, prime_count), prime_count, policy);
}

MulPlan plan_multiplication(const IntPolynomial& a, const IntPolynomial& b, unsigned prime_count,
                            BasePolicy policy) {
  if (a.length() == 0 || b.length() == 0 || a.is_zero() || b.is_zero()) {
    throw Error(ErrorCode::kEmptyInput, "zero polynomial has no degree");
  }
  return make_plan(std::max(a.length(), b.length()), min_coefficient_bits(a, b), prime_count, policy);
}

std::span<const PrimeSpec> prime_table() {
  static const std::vector<PrimeSpec> table = [] {
    auto t = parse_prime_table(detail::kPrimeTableText);
    std::sort(t.begin(), t.end(), [](const PrimeSpec& x, const PrimeSpec& y) { return x.p > y.p; });
    return t;
  }();
  return table;
}

std::vector<PrimeSpec> parse_prime_table(std::string_view text) {
  std::vector<PrimeSpec> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    PrimeSpec p;
    if (!(fields >> p.p >> p.q >> p.k >> p.generator)) {
      throw Error(ErrorCode::kParse, "prime table line " + std::to_string(line_no));
    }
    out.push_back(p);
  }
  return out;
}

std::string format_prime_table(std::span<const PrimeSpec> primes) {
  std::ostringstream out;
  out << "# cvl fourier prime table v1\n";
  out << "# p q k generator   (p = q * 2^k + 1, q odd, 2^62 < p < 2^63)\n";
  for (const auto& p : primes) out << p.p << ' ' << p.q << ' ' << p.k << ' ' << p.generator << '\n';
  return out.str();
}

std::vector<PrimeSpec> generate_prime_table(unsigned k_min, unsigned k_max, std::size_t per_exponent) {
  std::vector<PrimeSpec> out;
  const u64 lo = u64{1} << 62;
  const u64 hi = u64{1} << 63;
  for (unsigned k = k_min; k <= k_max; ++k) {
    // largest odd q with q * 2^k + 1 < 2^63
    u64 q = ((hi - 2) >> k);
    if ((q & 1) == 0) --q;
    std::size_t found = 0;
    for (; found < per_exponent && q > 0; q -= 2) {
      const u64 p = (q << k) + 1;
      if (p <= lo) break;
      if (!is_prime_u64(p)) continue;
      u64 g = 2;
      while (!is_primitive_root(g, p)) ++g;
      out.push_back({p, q, k, g});
      ++found;
    }
  }
  std::sort(out.begin(), out.end(), [](const PrimeSpec& x, const PrimeSpec& y) { return x.p > y.p; });
  return out;
}

std::span<const FermatPrimeEntry> fermat_prime_table() {
  static constexpr std::array<FermatPrimeEntry, 7> kTable = {{
      {(u64{1} << 63) + (u64{1} << 53), 2, 106},
      {0 - (u64{1} << 50), 4, 200},  // 2^64 - 2^50
      {(u64{1} << 63) + (u64{1} << 34), 8, 272},
      {(u64{1} << 62) + (u64{1} << 36), 16, 576},
      {(u64{1} << 62) + (u64{1} << 56), 32, 1792},
      {(u64{1} << 63) - (u64{1} << 40), 64, 2500},
      {0 - (u64{1} << 28), 128, 3584},  // 2^64 - 2^28
  }};
  return kTable;
}

std::string to_string(const MulPlan& plan) {
  std::ostringstream out;
  out << "d=" << plan.d << " N_min=" << plan.n_min << " N=" << plan.N << " K=" << plan.K
      << " M=" << plan.M << " s_y=" << plan.s_y << " e=" << plan.e << " f=" << plan.f << " primes=[";
  for (std::size_t i = 0; i < plan.primes.size(); ++i) {
    out << (i ? "," : "") << plan.primes[i].p << "(k=" << plan.primes[i].k << ")";
  }
  out << "]";
  return out.str();
}

}  // namespace cvl
