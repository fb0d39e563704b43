#include "cvl/multiplier.hpp"

#include <chrono>

#include "cvl/error.hpp"
#include "cvl/ntt2d.hpp"
#include "cvl/parallel.hpp"

namespace cvl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

ConvolutionResult bivariate_convolutions(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                                         unsigned workers, StageTimings* timings) {
  if (a.d != plan.d || b.d != plan.d || a.K != plan.K || b.K != plan.K) {
    throw Error(ErrorCode::kDimensionMismatch, "digit matrices do not conform to the plan");
  }
  const std::size_t K = plan.K;
  const std::size_t rows = plan.rows_out();
  const std::size_t n_primes = plan.primes.size();

  std::vector<ResidueGrid> grids;
  grids.reserve(n_primes);
  for (std::size_t pi = 0; pi < n_primes; ++pi) {
    const RootTable roots = make_root_table(plan, pi);
    TransformTimings tt;
    grids.push_back(paired_convolution(a, b, roots, pi, workers, &tt));
    if (timings) {
      timings->ntt_forward_ms += tt.forward_ms;
      timings->pointwise_ms += tt.pointwise_ms;
      timings->ntt_inverse_ms += tt.inverse_ms;
    }
  }

  const auto t0 = Clock::now();
  ConvolutionResult out(rows, K, plan.e);
  const CrtContext crt(plan.primes);
  if (n_primes == 2 && plan.e >= 2) {
    parallel_for(rows, workers, [&](std::size_t i) {
      const u64* a0 = grids[0].row(i).data();
      const u64* a1 = grids[1].row(i).data();
      u64* minus = out.minus(i, 0).data();
      u64* plus = out.plus(i, 0).data();
      for (std::size_t j = 0; j < K; ++j) {
        crt.combine_pair(a0[j], a1[j], minus + j * plan.e, plan.e);
        crt.combine_pair(a0[K + j], a1[K + j], plus + j * plan.e, plan.e);
      }
    });
    if (timings) timings->crt_ms += ms_since(t0);
    return out;
  }
  parallel_for(rows, workers, [&](std::size_t i) {
    u64 residues[3];
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t pi = 0; pi < n_primes; ++pi) residues[pi] = grids[pi].at(i, j);
      if (!crt.combine({residues, n_primes}, out.minus(i, j))) {
        throw Error(ErrorCode::kCorruptedConvolution,
                    "c-(" + std::to_string(i) + "," + std::to_string(j) + ") exceeds e words");
      }
      for (std::size_t pi = 0; pi < n_primes; ++pi) residues[pi] = grids[pi].at(i, K + j);
      if (!crt.combine({residues, n_primes}, out.plus(i, j))) {
        throw Error(ErrorCode::kCorruptedConvolution,
                    "c+(" + std::to_string(i) + "," + std::to_string(j) + ") exceeds e words");
      }
    }
  });
  if (timings) timings->crt_ms += ms_since(t0);
  return out;
}

std::pair<IntPolynomial, StageTimings> multiply_with_stats(const IntPolynomial& a, const IntPolynomial& b,
                                                           const MulOptions& options) {
  const auto start = Clock::now();
  StageTimings st;
  st.workers = resolve_workers(options.worker_hint);
  const MulPlan plan = plan_multiplication(a, b, options.prime_count, options.policy);

  auto t0 = Clock::now();
  const DigitMatrix da = bivariate_representation(a, plan, st.workers);
  const DigitMatrix db = &a == &b ? DigitMatrix{} : bivariate_representation(b, plan, st.workers);
  st.convert_ms += ms_since(t0);

  const ConvolutionResult conv = bivariate_convolutions(da, &a == &b ? da : db, plan, st.workers, &st);

  t0 = Clock::now();
  IntPolynomial full = recover_product(conv, plan, st.workers);
  const std::size_t len = a.length() + b.length() - 1;
  IntPolynomial out(len, full.coeff_words());
  for (std::size_t i = 0; i < len; ++i) {
    const auto src = full.coeff(i);
    std::copy(src.begin(), src.end(), out.coeff(i).begin());
  }
  out = out.normalized();
  st.recover_ms += ms_since(t0);
  st.total_ms = ms_since(start);
  return {std::move(out), st};
}

IntPolynomial multiply(const IntPolynomial& a, const IntPolynomial& b, const MulOptions& options) {
  return multiply_with_stats(a, b, options).first;
}

}  // namespace cvl
