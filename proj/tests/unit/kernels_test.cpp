#include <gtest/gtest.h>

#include <random>

#include "cvl/kernels.hpp"
#include "cvl/modfield.hpp"
#include "cvl/params.hpp"

using namespace cvl;

namespace {

// A Fourier-shaped prime (2^32 | p - 1) and a generic one.
std::vector<PrimeField> moduli() {
  std::vector<PrimeField> out;
  out.emplace_back(prime_table().back());
  out.emplace_back(prime_table()[0]);
  out.emplace_back(PrimeSpec{0x7fffffffffffffe7ULL, 0, 0, 0});  // p - 1 = 2 * odd
  out.emplace_back(PrimeSpec{998244353, 119, 23, 3});
  return out;
}

struct Pair {
  const simd::Kernels& ref;
  const simd::Kernels& alt;
};

std::vector<u64> residues(std::mt19937_64& gen, std::size_t n, u64 p) {
  std::vector<u64> v(n);
  for (auto& x : v) x = gen() % p;
  // edge values
  if (n > 2) {
    v[0] = 0;
    v[1] = p - 1;
  }
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    alt_ = simd::avx2_kernels();
    if (!alt_) GTEST_SKIP() << "AVX2 kernels unavailable";
  }
  const simd::Kernels& ref() const { return simd::scalar_kernels(); }
  const simd::Kernels& alt() const { return *alt_; }
  const simd::Kernels* alt_ = nullptr;
};

const std::size_t kSizes[] = {4, 8, 12, 16, 20, 36, 64, 100, 256};

}  // namespace

TEST(KernelTables, ScalarAlwaysPresent) {
  EXPECT_EQ(simd::scalar_kernels().isa, simd::Isa::kScalar);
  const auto isas = simd::available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), simd::Isa::kScalar);
  EXPECT_TRUE(simd::set_active_isa(simd::Isa::kScalar));
  EXPECT_EQ(simd::active_kernels().isa, simd::Isa::kScalar);
  simd::set_active_isa(isas.back());
}

TEST(ScalarKernels, ButterfliesMatchFieldArithmetic) {
  const auto& k = simd::scalar_kernels();
  std::mt19937_64 gen(1);
  for (const PrimeField& f : moduli()) {
    const u64 p = f.modulus();
    auto x = residues(gen, 64, p), y = residues(gen, 64, p);
    const u64 w = gen() % p;
    auto x1 = x, y1 = y;
    k.dif_bcast(x1.data(), y1.data(), 64, w, f.shoup(w), p);
    auto x2 = x, y2 = y;
    k.dit_bcast(x2.data(), y2.data(), 64, w, f.shoup(w), p);
    for (std::size_t i = 0; i < 64; ++i) {
      ASSERT_EQ(x1[i], f.add(x[i], y[i]));
      ASSERT_EQ(y1[i], f.mul(f.sub(x[i], y[i]), w));
      ASSERT_EQ(x2[i], f.add(x[i], f.mul(y[i], w)));
      ASSERT_EQ(y2[i], f.sub(x[i], f.mul(y[i], w)));
    }
    auto m = x;
    k.mont_mul(m.data(), y.data(), 64, p, f.mont_inverse());
    for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(m[i], f.mont_mul(x[i], y[i]));
  }
}

TEST_F(KernelEquivalence, Butterflies) {
  std::mt19937_64 gen(2);
  for (const PrimeField& f : moduli()) {
    const u64 p = f.modulus();
    for (std::size_t n : kSizes) {
      const auto x = residues(gen, n, p), y = residues(gen, n, p), tw = residues(gen, n, p);
      std::vector<u64> tws(n);
      for (std::size_t i = 0; i < n; ++i) tws[i] = f.shoup(tw[i]);
      const u64 w = gen() % p;
      for (int kind = 0; kind < 4; ++kind) {
        auto xa = x, ya = y, xb = x, yb = y;
        switch (kind) {
          case 0:
            ref().dif_bcast(xa.data(), ya.data(), n, w, f.shoup(w), p);
            alt().dif_bcast(xb.data(), yb.data(), n, w, f.shoup(w), p);
            break;
          case 1:
            ref().dit_bcast(xa.data(), ya.data(), n, w, f.shoup(w), p);
            alt().dit_bcast(xb.data(), yb.data(), n, w, f.shoup(w), p);
            break;
          case 2:
            ref().dif_twiddle(xa.data(), ya.data(), n, tw.data(), tws.data(), p);
            alt().dif_twiddle(xb.data(), yb.data(), n, tw.data(), tws.data(), p);
            break;
          case 3:
            ref().dit_twiddle(xa.data(), ya.data(), n, tw.data(), tws.data(), p);
            alt().dit_twiddle(xb.data(), yb.data(), n, tw.data(), tws.data(), p);
            break;
        }
        ASSERT_EQ(xa, xb) << "kind " << kind << " p=" << p << " n=" << n;
        ASSERT_EQ(ya, yb) << "kind " << kind << " p=" << p << " n=" << n;
      }
    }
  }
}

TEST_F(KernelEquivalence, ScalingAndMontgomery) {
  std::mt19937_64 gen(3);
  for (const PrimeField& f : moduli()) {
    const u64 p = f.modulus();
    for (std::size_t n : kSizes) {
      const auto x = residues(gen, n, p), y = residues(gen, n, p), tw = residues(gen, n, p);
      std::vector<u64> tws(n);
      for (std::size_t i = 0; i < n; ++i) tws[i] = f.shoup(tw[i]);
      const u64 w = gen() % p;

      auto a = x, b = x;
      ref().mont_mul(a.data(), y.data(), n, p, f.mont_inverse());
      alt().mont_mul(b.data(), y.data(), n, p, f.mont_inverse());
      ASSERT_EQ(a, b);

      a = x, b = x;
      ref().scale_twiddle(a.data(), n, tw.data(), tws.data(), p);
      alt().scale_twiddle(b.data(), n, tw.data(), tws.data(), p);
      ASSERT_EQ(a, b);

      a = x, b = x;
      ref().scale_bcast(a.data(), n, w, f.shoup(w), p);
      alt().scale_bcast(b.data(), n, w, f.shoup(w), p);
      ASSERT_EQ(a, b);

      std::vector<u64> da(n), db(n);
      ref().scale_bcast_to(da.data(), x.data(), n, w, f.shoup(w), p);
      alt().scale_bcast_to(db.data(), x.data(), n, w, f.shoup(w), p);
      ASSERT_EQ(da, db);
    }
  }
}

TEST_F(KernelEquivalence, RadixFourBlocks) {
  std::mt19937_64 gen(4);
  for (const PrimeField& f : moduli()) {
    const u64 p = f.modulus();
    // Any multiplier works for the equivalence check.
    const u64 root = f.spec().k >= 2 ? primitive_root_of_order(4, f.spec()) : gen() % p;
    for (std::size_t n : {4u, 8u, 12u, 16u, 32u, 68u, 256u}) {
      const auto x = residues(gen, n, p);
      auto a = x, b = x;
      ref().dif_tail4(a.data(), n, root, f.shoup(root), p);
      alt().dif_tail4(b.data(), n, root, f.shoup(root), p);
      ASSERT_EQ(a, b) << "dif p=" << p << " n=" << n;
      a = x, b = x;
      ref().dit_head4(a.data(), n, root, f.shoup(root), p);
      alt().dit_head4(b.data(), n, root, f.shoup(root), p);
      ASSERT_EQ(a, b) << "dit p=" << p << " n=" << n;
    }
  }
}

TEST_F(KernelEquivalence, Embed) {
  std::mt19937_64 gen(5);
  for (const PrimeField& f : moduli()) {
    const u64 p = f.modulus();
    for (std::size_t n : kSizes) {
      std::vector<i64> digits(n);
      const u64 lim = std::min<u64>(p / 2, u64{1} << 62);
      for (auto& d : digits) d = static_cast<i64>(gen() % (2 * lim)) - static_cast<i64>(lim);
      std::vector<u64> a(n), b(n);
      ref().embed(a.data(), digits.data(), n, p);
      alt().embed(b.data(), digits.data(), n, p);
      ASSERT_EQ(a, b);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(a[i], f.from_signed(digits[i]));
    }
  }
}
