#pragma once

#include <optional>
#include <utility>

#include "cvl/codec.hpp"
#include "cvl/params.hpp"
#include "cvl/zpoly.hpp"

namespace cvl {

struct MulOptions {
  unsigned prime_count = 2;             // 1, 2 or 3
  std::optional<unsigned> worker_hint;  // hardware concurrency when empty
  BasePolicy policy = BasePolicy::kWideDigits;
};

// Wall time per pipeline stage, milliseconds.
struct StageTimings {
  double convert_ms = 0;
  double ntt_forward_ms = 0;
  double pointwise_ms = 0;
  double ntt_inverse_ms = 0;
  double crt_ms = 0;
  double recover_ms = 0;
  double total_ms = 0;
  unsigned workers = 1;

  double stage_sum_ms() const {
    return convert_ms + ntt_forward_ms + pointwise_ms + ntt_inverse_ms + crt_ms + recover_ms;
  }
};

// a(y) b(y), exact. The result has len(a) + len(b) - 1 coefficients.
IntPolynomial multiply(const IntPolynomial& a, const IntPolynomial& b, const MulOptions& options = {});
std::pair<IntPolynomial, StageTimings> multiply_with_stats(const IntPolynomial& a, const IntPolynomial& b,
                                                           const MulOptions& options = {});

// C+ and C- over Z for two digit matrices of the plan: one paired transform
// per prime, then symmetric lift or CRT. Rows 0 .. 2d - 2.
ConvolutionResult bivariate_convolutions(const DigitMatrix& a, const DigitMatrix& b, const MulPlan& plan,
                                         unsigned workers = 1, StageTimings* timings = nullptr);

}  // namespace cvl
