#include "cvl/zpoly.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cvl/error.hpp"
#include "gmp_bridge.hpp"

namespace cvl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "empty input";
    case ErrorCode::kTransformLengthUnsupported: return "transform length unsupported";
    case ErrorCode::kBoundExceedsPrimeCapacity: return "coefficient bound exceeds prime capacity";
    case ErrorCode::kOrderUnavailable: return "order unavailable";
    case ErrorCode::kModuliNotCoprime: return "moduli not coprime";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kEncoding: return "encoding error";
    case ErrorCode::kParityViolation: return "parity violation";
    case ErrorCode::kCorruptedConvolution: return "corrupted convolution";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInternalBound: return "internal bound error";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "I/O error";
  }
  return "unknown error";
}

namespace words {

bool is_negative(std::span<const u64> x) { return !x.empty() && (x.back() >> 63) != 0; }

void negate(std::span<u64> x) {
  unsigned char carry = 1;
  for (auto& w : x) {
    const u64 inv = ~w;
    w = inv + carry;
    carry = (carry && w == 0) ? 1 : 0;
  }
}

unsigned halve(std::span<u64> x) {
  if (x.empty()) return 0;
  const unsigned out = static_cast<unsigned>(x[0] & 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) x[i] = (x[i] >> 1) | (x[i + 1] << 63);
  x.back() = static_cast<u64>(static_cast<i64>(x.back()) >> 1);
  return out;
}

bool fits_in(std::span<const u64> x, std::size_t keep) {
  if (keep >= x.size()) return true;
  if (keep == 0) return std::all_of(x.begin(), x.end(), [](u64 w) { return w == 0; });
  const u64 ext = (x[keep - 1] >> 63) ? ~u64{0} : 0;
  return std::all_of(x.begin() + static_cast<std::ptrdiff_t>(keep), x.end(),
                     [ext](u64 w) { return w == ext; });
}

std::size_t signed_bit_width(std::span<const u64> x) {
  const u64 ext = is_negative(x) ? ~u64{0} : 0;
  for (std::size_t i = x.size(); i-- > 0;) {
    const u64 w = x[i] ^ ext;
    if (w != 0) return i * kWordBits + static_cast<std::size_t>(std::bit_width(w)) + 1;
  }
  return 1;
}

namespace {

inline u64 word_at(std::span<const u64> x, std::size_t i, u64 ext) {
  return i < x.size() ? x[i] : ext;
}

// Word k of (x << shift), with x sign-extended; k indexes result words.
inline u64 shifted_word(std::span<const u64> x, std::size_t k, std::size_t shift, u64 ext) {
  const std::size_t wi = shift / kWordBits;
  const unsigned b = shift % kWordBits;
  if (k < wi) return 0;
  const std::size_t src = k - wi;
  if (b == 0) return word_at(x, src, ext);
  const u64 hi = word_at(x, src, ext) << b;
  const u64 lo = src == 0 ? 0 : word_at(x, src - 1, ext) >> (kWordBits - b);
  return hi | lo;
}

}  // namespace

u64 extract_bits(std::span<const u64> x, std::size_t lo, unsigned len) {
  const u64 ext = is_negative(x) ? ~u64{0} : 0;
  const std::size_t wi = lo / kWordBits;
  const unsigned b = lo % kWordBits;
  u64 v = word_at(x, wi, ext) >> b;
  if (b != 0) v |= word_at(x, wi + 1, ext) << (kWordBits - b);
  return len >= kWordBits ? v : (v & ((u64{1} << len) - 1));
}

void add_shifted(std::span<u64> acc, std::span<const u64> value, std::size_t shift, int sign) {
  if (value.size() * kWordBits + shift > acc.size() * kWordBits) {
    throw Error(ErrorCode::kInternalBound, "shifted operand wider than accumulator");
  }
  const u64 ext = is_negative(value) ? ~u64{0} : 0;
  const std::size_t start = shift / kWordBits;
  if (sign >= 0) {
    unsigned char carry = 0;
    for (std::size_t k = start; k < acc.size(); ++k) {
      const u64 v = shifted_word(value, k, shift, ext);
      const u64 s = acc[k] + v;
      const unsigned char c1 = s < v;
      acc[k] = s + carry;
      carry = c1 | (acc[k] < s);
    }
  } else {
    unsigned char borrow = 0;
    for (std::size_t k = start; k < acc.size(); ++k) {
      const u64 v = shifted_word(value, k, shift, ext);
      const u64 a = acc[k];
      const u64 d = a - v;
      const unsigned char b1 = a < v;
      acc[k] = d - borrow;
      borrow = b1 | (d < borrow);
    }
  }
}

}  // namespace words

WideInt::WideInt(std::size_t n, i64 value) : words_(n, value < 0 ? ~u64{0} : 0) {
  if (n > 0) words_[0] = static_cast<u64>(value);
}

bool WideInt::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](u64 w) { return w == 0; });
}

WideInt WideInt::resized(std::size_t n) const {
  WideInt out(n);
  const u64 ext = negative() ? ~u64{0} : 0;
  for (std::size_t i = 0; i < n; ++i) out.words_[i] = i < words_.size() ? words_[i] : ext;
  return out;
}

bool WideInt::operator==(const WideInt& other) const {
  const std::size_t n = std::max(size(), other.size());
  return resized(n).words_ == other.resized(n).words_;
}

WideInt wide_add_shifted(const WideInt& acc, const WideInt& value, std::size_t shift, int sign) {
  WideInt out = acc;
  words::add_shifted(out.words(), value.words(), shift, sign);
  return out;
}

WideInt wide_halve(const WideInt& x) {
  WideInt out = x;
  if (words::halve(out.words()) != 0) {
    throw Error(ErrorCode::kParityViolation, "halving an odd value");
  }
  return out;
}

IntPolynomial IntPolynomial::from_int64(std::span<const i64> coeffs) {
  IntPolynomial p(coeffs.size(), 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.words_[i] = static_cast<u64>(coeffs[i]);
  return p;
}

std::size_t IntPolynomial::bit_width() const {
  std::size_t w = 1;
  for (std::size_t i = 0; i < length_; ++i) w = std::max(w, words::signed_bit_width(coeff(i)));
  return w;
}

bool IntPolynomial::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](u64 w) { return w == 0; });
}

IntPolynomial IntPolynomial::with_coeff_words(std::size_t n) const {
  IntPolynomial out(length_, n);
  for (std::size_t i = 0; i < length_; ++i) {
    const auto src = coeff(i);
    if (!words::fits_in(src, n)) {
      throw Error(ErrorCode::kInternalBound, "coefficient does not fit requested width");
    }
    const u64 ext = words::is_negative(src) ? ~u64{0} : 0;
    auto dst = out.coeff(i);
    for (std::size_t k = 0; k < n; ++k) dst[k] = k < src.size() ? src[k] : ext;
  }
  return out;
}

IntPolynomial IntPolynomial::normalized() const {
  return with_coeff_words(words_for_bits(bit_width()));
}

bool IntPolynomial::operator==(const IntPolynomial& other) const {
  if (length_ != other.length_) return false;
  return first_difference(*this, other) < 0;
}

std::ptrdiff_t first_difference(const IntPolynomial& a, const IntPolynomial& b) {
  const std::size_t n = std::min(a.length(), b.length());
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = a.coeff(i);
    const auto y = b.coeff(i);
    const u64 ex = words::is_negative(x) ? ~u64{0} : 0;
    const u64 ey = words::is_negative(y) ? ~u64{0} : 0;
    const std::size_t w = std::max(x.size(), y.size());
    for (std::size_t k = 0; k < w; ++k) {
      const u64 xv = k < x.size() ? x[k] : ex;
      const u64 yv = k < y.size() ? y[k] : ey;
      if (xv != yv) return static_cast<std::ptrdiff_t>(i);
    }
  }
  if (a.length() != b.length()) return static_cast<std::ptrdiff_t>(n);
  return -1;
}

u64 polynomial_hash(const IntPolynomial& poly) {
  const IntPolynomial n = poly.normalized();
  u64 h = 0xcbf29ce484222325ull;
  auto mix = [&h](u64 v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(n.length());
  for (u64 w : n.raw_words()) mix(w);
  return h;
}

std::string coefficient_to_decimal(std::span<const u64> coeff) {
  return gmp::from_words(coeff).get_str(10);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + why);
}

bool parse_count(std::string_view s, std::size_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_decimal_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

IntPolynomial parse_polynomial(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t d = 0;
  std::size_t declared_bits = 0;
  bool have_header = false;
  std::vector<mpz_class> values;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      // "d=<count>" optionally followed by " n=<bits>".
      std::istringstream fields{std::string(line)};
      std::string tok;
      while (fields >> tok) {
        std::string_view t = tok;
        if (t.starts_with("d=") && parse_count(t.substr(2), d)) continue;
        if (t.starts_with("n=") && parse_count(t.substr(2), declared_bits) && declared_bits > 0) continue;
        parse_fail(line_no, "malformed header '" + std::string(line) + "'");
      }
      if (d == 0) parse_fail(line_no, "header must declare d >= 1");
      have_header = true;
      values.reserve(d);
      continue;
    }
    if (values.size() == d) parse_fail(line_no, "more than d=" + std::to_string(d) + " coefficients");
    if (!is_decimal_integer(line)) parse_fail(line_no, "not an integer: '" + std::string(line) + "'");
    std::string digits(line.front() == '+' ? line.substr(1) : line);
    values.emplace_back(digits, 10);
    if (declared_bits > 0) {
      mpz_class lo = -(mpz_class(1) << (declared_bits - 1));
      mpz_class hi = (mpz_class(1) << (declared_bits - 1)) - 1;
      if (values.back() < lo || values.back() > hi) {
        parse_fail(line_no, "coefficient outside declared width n=" + std::to_string(declared_bits));
      }
    }
  }
  if (!have_header) parse_fail(line_no, "missing header 'd=<count>'");
  if (values.size() != d) {
    parse_fail(line_no, "expected " + std::to_string(d) + " coefficients, found " +
                            std::to_string(values.size()));
  }

  std::size_t cw = 1;
  for (const auto& v : values) cw = std::max(cw, gmp::words_needed(v));
  IntPolynomial poly(d, cw);
  for (std::size_t i = 0; i < d; ++i) gmp::to_words(values[i], poly.coeff(i));
  return poly;
}

IntPolynomial parse_polynomial(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_polynomial(in);
}

void format_polynomial(const IntPolynomial& poly, std::ostream& out) {
  out << "d=" << poly.length() << '\n';
  for (std::size_t i = 0; i < poly.length(); ++i) out << coefficient_to_decimal(poly.coeff(i)) << '\n';
}

std::string format_polynomial(const IntPolynomial& poly) {
  std::ostringstream out;
  format_polynomial(poly, out);
  return out.str();
}

IntPolynomial read_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return parse_polynomial(in);
}

void write_polynomial_file(const IntPolynomial& poly, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  format_polynomial(poly, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace cvl
