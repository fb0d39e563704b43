#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "cvl/bench.hpp"
#include "cvl/codec.hpp"
#include "cvl/error.hpp"
#include "cvl/kernels.hpp"
#include "cvl/multiplier.hpp"
#include "cvl/oracle.hpp"
#include "test_support.hpp"

using namespace cvl;

namespace {

MulOptions opts(unsigned primes, unsigned workers) {
  MulOptions o;
  o.prime_count = primes;
  o.worker_hint = workers;
  return o;
}

}  // namespace

TEST(Multiply, OneTimesOne) {
  const auto one = IntPolynomial::from_int64({1});
  EXPECT_EQ(multiply(one, one), one);
}

TEST(Multiply, DifferenceOfSquares) {
  EXPECT_EQ(multiply(IntPolynomial::from_int64({1, 1}), IntPolynomial::from_int64({-1, 1})),
            IntPolynomial::from_int64({-1, 0, 1}));
}

TEST(Multiply, ResultLengthIsSumOfLengthsMinusOne) {
  const auto a = IntPolynomial::from_int64({1, 2, 3, 4, 5});
  const auto b = IntPolynomial::from_int64({7});
  const auto c = multiply(a, b);
  EXPECT_EQ(c.length(), 5u);
  EXPECT_EQ(c, IntPolynomial::from_int64({7, 14, 21, 28, 35}));
}

TEST(Multiply, ZeroRejected) {
  const auto zero = IntPolynomial::from_int64({0});
  EXPECT_THROW(multiply(zero, IntPolynomial::from_int64({1})), Error);
}

TEST(Multiply, RandomDenseMatchesSchoolbook) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = generate_random_dense(256, 256, 2 * seed + 1);
    const auto b = generate_random_dense(256, 256, 2 * seed + 2);
    ASSERT_EQ(multiply(a, b), schoolbook_multiply(a, b)) << "seed " << seed;
  }
}

TEST(Multiply, ExtremeNegatives) {
  for (std::size_t N : {1u, 2u, 63u, 64u, 65u, 200u, 1000u}) {
    for (std::size_t d : {1u, 3u, 64u}) {
      const auto a = test_util::constant_fill(d, -(mpz_class(1) << (N - 1)));
      const auto b = test_util::constant_fill(d, (mpz_class(1) << (N - 1)) - 1);
      ASSERT_EQ(multiply(a, a), schoolbook_multiply(a, a)) << "N=" << N << " d=" << d;
      if (b.is_zero()) continue;
      ASSERT_EQ(multiply(a, b), schoolbook_multiply(a, b)) << "N=" << N << " d=" << d;
    }
  }
}

TEST(Multiply, UnequalLengthsAndWidths) {
  const auto a = generate_random_dense(37, 900, 1);
  const auto b = generate_random_dense(300, 5, 2);
  EXPECT_EQ(multiply(a, b), schoolbook_multiply(a, b));
  EXPECT_EQ(multiply(b, a), schoolbook_multiply(a, b));
}

TEST(Multiply, RingIdentities) {
  std::mt19937_64 gen(21);
  const auto one = IntPolynomial::from_int64({1});
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + gen() % 64;
    const std::size_t N = 1 + gen() % 300;
    const auto a = generate_random_dense(d, N, gen());
    const auto b = generate_random_dense(1 + gen() % 64, N, gen());
    const auto c = generate_random_dense(1 + gen() % 64, 1 + gen() % 300, gen());
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    const auto bc = test_util::add(b, c);
    if (bc.is_zero()) continue;
    const auto lhs = multiply(a, bc);
    const auto rhs = test_util::add(multiply(a, b), multiply(a, c));
    auto l = to_mpz(lhs), r = to_mpz(rhs);
    while (l.size() > 1 && l.back() == 0) l.pop_back();
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    ASSERT_EQ(l, r);
    ASSERT_EQ(multiply(a, b), multiply(b, a));
    ASSERT_EQ(multiply(a, one), a);
  }
}

TEST(Multiply, PrimeCountsAgree) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + gen() % 200;
    const std::size_t N = 1 + gen() % 30;
    const auto a = generate_random_dense(d, N, gen());
    const auto b = generate_random_dense(d, N, gen());
    if (a.is_zero() || b.is_zero()) continue;
    const auto want = schoolbook_multiply(a, b);
    for (unsigned primes : {1u, 2u, 3u}) ASSERT_EQ(multiply(a, b, opts(primes, 1)), want) << primes;
  }
  const auto a = generate_random_dense(500, 500, 1);
  EXPECT_EQ(multiply(a, a, opts(2, 1)), multiply(a, a, opts(3, 1)));
}

TEST(Multiply, BalancedPolicyAgrees) {
  const auto a = generate_random_dense(100, 333, 5);
  const auto b = generate_random_dense(100, 333, 6);
  MulOptions o;
  o.policy = BasePolicy::kBalanced;
  EXPECT_EQ(multiply(a, b, o), multiply(a, b));
}

TEST(Multiply, DeterministicAcrossWorkers) {
  const auto a = generate_random_dense(1000, 700, 8);
  const auto b = generate_random_dense(1000, 700, 9);
  const auto base = multiply(a, b, opts(2, 1));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned w : {2u, 4u, hw}) {
    const auto c = multiply(a, b, opts(2, w));
    ASSERT_EQ(c.raw_words().size(), base.raw_words().size());
    EXPECT_TRUE(std::equal(c.raw_words().begin(), c.raw_words().end(), base.raw_words().begin())) << w;
  }
}

TEST(MultiplyWithStats, StagesAccountForTotal) {
  const auto a = generate_random_dense(1024, 1024, 1);
  const auto b = generate_random_dense(1024, 1024, 2);
  const auto [c, t] = multiply_with_stats(a, b, opts(2, 1));
  EXPECT_EQ(c, multiply(a, b, opts(2, 1)));
  EXPECT_EQ(t.workers, 1u);
  EXPECT_GT(t.total_ms, 0);
  EXPECT_LE(t.stage_sum_ms(), t.total_ms * 1.0001);
  EXPECT_GE(t.stage_sum_ms(), t.total_ms * 0.9);
  for (double s : {t.convert_ms, t.ntt_forward_ms, t.pointwise_ms, t.ntt_inverse_ms, t.crt_ms, t.recover_ms}) {
    EXPECT_GE(s, 0);
  }
}

TEST(BivariateConvolutions, MatchNaiveOracleAndIdentity) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + gen() % 8;
    const std::size_t bits = 1 + gen() % 24;
    const auto a = generate_random_dense(d, bits, gen());
    const auto b = generate_random_dense(d, bits, gen());
    if (a.is_zero() || b.is_zero()) continue;
    const MulPlan plan = plan_multiplication(a, b, 2, BasePolicy::kBalanced);
    if (plan.K > 8) continue;
    const DigitMatrix da = bivariate_representation(a, plan), db = bivariate_representation(b, plan);
    const ConvolutionResult r = bivariate_convolutions(da, db, plan);
    const BigGrid full = naive_bivariate_convolution(da, db, Fold::kNone);
    for (std::size_t i = 0; i < r.rows; ++i) {
      for (std::size_t j = 0; j < plan.K; ++j) {
        const mpz_class cp = to_mpz(r.plus(i, j)), cm = to_mpz(r.minus(i, j));
        // -C+/2 (x^K - 1) + C-/2 (x^K + 1)
        ASSERT_EQ((cp + cm) / 2, full.at(i, j));
        const mpz_class high = j + plan.K < full.cols ? full.at(i, j + plan.K) : mpz_class(0);
        ASSERT_EQ((cm - cp) / 2, high);
      }
    }
  }
}

TEST(Multiply, ScalarAndSimdKernelsAgree) {
  const auto isas = simd::available_isas();
  if (isas.size() < 2) GTEST_SKIP() << "only one kernel set on this CPU";
  const auto a = generate_random_dense(1500, 1200, 31);
  const auto b = generate_random_dense(1500, 1200, 32);
  std::vector<IntPolynomial> out;
  for (simd::Isa isa : isas) {
    ASSERT_TRUE(simd::set_active_isa(isa));
    out.push_back(multiply(a, b, opts(2, 1)));
  }
  simd::set_active_isa(isas.back());
  for (const auto& c : out) EXPECT_EQ(c, out.front());
  EXPECT_EQ(out.front(), kronecker_multiply(a, b));
}
