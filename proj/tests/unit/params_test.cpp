#include <gtest/gtest.h>

#include <gmpxx.h>

#include <bit>
#include <fstream>
#include <random>
#include <sstream>

#include "cvl/error.hpp"
#include "cvl/params.hpp"

using namespace cvl;

namespace {

mpz_class big(u64 v) { return mpz_class(std::to_string(v)); }

// Recomputes every plan inequality with GMP.
void check_plan(const MulPlan& plan) {
  SCOPED_TRACE(to_string(plan));
  ASSERT_EQ(plan.N, plan.K * plan.M);
  ASSERT_NE(plan.K, plan.N);
  ASSERT_NE(plan.M, plan.N);
  ASSERT_GE(plan.K, 2u);
  ASSERT_TRUE(std::has_single_bit(plan.K));
  ASSERT_GE(plan.N, plan.n_min);
  ASSERT_LE(plan.M, 3u * plan.w);
  ASSERT_GE(plan.s_y, 2 * plan.d - 1);
  ASSERT_TRUE(std::has_single_bit(plan.s_y));
  ASSERT_TRUE(plan.s_y == 1 || plan.s_y / 2 < 2 * plan.d - 1);

  mpz_class prod = 1;
  for (const auto& p : plan.primes) {
    prod *= big(p.p);
    ASSERT_GE(mpz_class(1) << p.k, big(plan.K));
    ASSERT_GE(mpz_class(1) << p.k, big(plan.s_y));
    ASSERT_EQ((big(p.p) - 1) % (mpz_class(1) << p.k), 0);
  }
  const mpz_class bound = 4 * big(plan.d) * big(plan.K) * (mpz_class(1) << (2 * plan.M));
  ASSERT_GT(prod, bound);

  mpz_class dk = big(plan.d) * big(plan.K);
  std::size_t log_dk = 0;
  while ((mpz_class(1) << log_dk) < dk) ++log_dk;
  ASSERT_GE(plan.e * 64, 2 + log_dk + 2 * plan.M);
  ASSERT_EQ(plan.f, (plan.N + 63) / 64 + plan.e);
}

}  // namespace

TEST(DetermineBase, BalancedExamples) {
  EXPECT_EQ(determine_base(32, 100, BasePolicy::kBalanced), (BaseSplit{128, 32, 4}));
  EXPECT_EQ(determine_base(1, 2, BasePolicy::kBalanced), (BaseSplit{4, 2, 2}));
  EXPECT_EQ(determine_base(1024, 64, BasePolicy::kBalanced), (BaseSplit{64, 32, 2}));
}

TEST(DetermineBase, FromPolynomials) {
  // max magnitude below 2^99 needs 100 bits
  std::vector<i64> dummy(32, 1);
  IntPolynomial a = IntPolynomial::from_int64(dummy).with_coeff_words(2);
  a.coeff(5)[1] = u64{1} << 34;  // 2^98
  EXPECT_EQ(determine_base(a, a), (BaseSplit{128, 32, 4}));
  const auto one = IntPolynomial::from_int64({1});
  EXPECT_EQ(determine_base(one, one), (BaseSplit{4, 2, 2}));
}

TEST(DetermineBase, ZeroPolynomialRejected) {
  const auto zero = IntPolynomial::from_int64({0, 0});
  const auto one = IntPolynomial::from_int64({1});
  try {
    determine_base(zero, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  EXPECT_THROW(plan_multiplication(one, zero, 2), Error);
}

TEST(RecoveryPrimes, Examples) {
  const auto two = recovery_primes(1 << 10, 1 << 10, 16, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NE(two[0].p, two[1].p);
  for (const auto& p : two) {
    EXPECT_GE(p.k, 11u);
    EXPECT_GE(p.p, u64{1} << 61);
  }
  EXPECT_GT(big(two[0].p) * big(two[1].p), mpz_class(1) << 54);

  const auto one = recovery_primes(2, 2, 1, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_GT(one[0].p, 64u);
  EXPECT_GE(one[0].k, 2u);

  try {
    recovery_primes(1 << 20, 1 << 20, 64, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundExceedsPrimeCapacity);
  }
}

TEST(RecoveryPrimes, TransformLengthUnsupported) {
  try {
    recovery_primes(std::size_t{1} << 60, 2, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransformLengthUnsupported);
  }
}

TEST(RecoveryPrimes, LargestFirstAndDeterministic) {
  const auto a = recovery_primes(100, 64, 20, 3);
  const auto b = recovery_primes(100, 64, 20, 3);
  EXPECT_EQ(a, b);
  EXPECT_GT(a[0].p, a[1].p);
  EXPECT_GT(a[1].p, a[2].p);
}

TEST(MulPlan, InvariantsOnRandomSizes) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + gen() % (1 << 16);
    const std::size_t n = 1 + gen() % (1 << 12);
    for (auto policy : {BasePolicy::kWideDigits, BasePolicy::kBalanced}) {
      for (unsigned count : {2u, 3u}) {
        MulPlan plan;
        try {
          plan = make_plan(d, n, count, policy);
        } catch (const Error& e) {
          // Only the balanced rule may run out of prime capacity.
          ASSERT_EQ(policy, BasePolicy::kBalanced) << e.what();
          ASSERT_EQ(e.code(), ErrorCode::kBoundExceedsPrimeCapacity);
          continue;
        }
        check_plan(plan);
      }
    }
  }
}

TEST(MulPlan, DegenerateConstant) {
  const auto one = IntPolynomial::from_int64({1});
  const MulPlan plan = plan_multiplication(one, one, 1);
  check_plan(plan);
  EXPECT_EQ(plan.d, 1u);
  EXPECT_EQ(plan.s_y, 1u);
}

TEST(FermatTable, StoredRows) {
  const auto t = fermat_prime_table();
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0].base, (u64{1} << 63) + (u64{1} << 53));
  EXPECT_EQ(t[0].exponent, 2u);
  EXPECT_EQ(t[0].two_adic_valuation, 106u);
  EXPECT_EQ(t[3].base, (u64{1} << 62) + (u64{1} << 36));
  EXPECT_EQ(t[3].exponent, 16u);
  EXPECT_EQ(t[3].two_adic_valuation, 576u);
  const unsigned exps[] = {2, 4, 8, 16, 32, 64, 128};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(t[i].exponent, exps[i]);
}

TEST(PrimeTableResource, ParsesAndFormats) {
  const std::string text = format_prime_table(prime_table());
  EXPECT_EQ(parse_prime_table(text), std::vector<PrimeSpec>(prime_table().begin(), prime_table().end()));
  EXPECT_THROW(parse_prime_table("12 3\n"), Error);
}

TEST(PrimeTableResource, RegenerationMatchesBundledFile) {
  std::ifstream in(std::string(CVL_SOURCE_DIR) + "/resources/fourier_primes.txt");
  ASSERT_TRUE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  auto bundled = parse_prime_table(ss.str());
  // Spot-check two exponents rather than the full search.
  for (unsigned k : {40u, 56u}) {
    auto fresh = generate_prime_table(k, k, 6);
    std::vector<PrimeSpec> stored;
    for (const auto& p : bundled)
      if (p.k == k) stored.push_back(p);
    auto by_p = [](const PrimeSpec& x, const PrimeSpec& y) { return x.p > y.p; };
    std::sort(fresh.begin(), fresh.end(), by_p);
    std::sort(stored.begin(), stored.end(), by_p);
    EXPECT_EQ(fresh, stored) << "k=" << k;
  }
}
