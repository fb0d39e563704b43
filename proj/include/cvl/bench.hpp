#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvl/multiplier.hpp"
#include "cvl/zpoly.hpp"

namespace cvl {

// d coefficients, each uniform over [-2^(N-1), 2^(N-1) - 1] (mt19937_64).
IntPolynomial generate_random_dense(std::size_t d, std::size_t N, std::uint64_t seed);

enum class Algorithm { kCvl, kKronecker, kSchoolbook };
std::string_view algorithm_name(Algorithm a);

struct SweepPoint {
  std::size_t d = 0;
  std::size_t N = 0;
};

struct BenchConfig {
  std::vector<SweepPoint> sweep;
  std::vector<Algorithm> algorithms = {Algorithm::kCvl, Algorithm::kKronecker};
  unsigned trials = 5;
  std::vector<unsigned> worker_counts = {1};
  std::uint64_t seed = 1;
  std::string output_path;
  unsigned prime_count = 2;
};

struct BenchRow {
  SweepPoint point;
  Algorithm algorithm = Algorithm::kCvl;
  unsigned workers = 1;
  unsigned trials = 0;
  double median_ms = 0;
  double min_ms = 0;
  bool correctness_ok = false;
  std::optional<StageTimings> stages;  // cvl only; from the median trial
  std::optional<double> speedup_vs_1;  // same point and algorithm, 1 worker
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> mismatches;
  bool all_correct() const { return mismatches.empty(); }
};

// "d=N:2^a..2^b", "d=N:v1,v2,..." or "DxN,DxN,...".
std::vector<SweepPoint> parse_sweep(std::string_view text);
// Comma list of counts or "max".
std::vector<unsigned> parse_worker_counts(std::string_view text);
std::vector<Algorithm> parse_algorithms(std::string_view text);

// Every row is checked against a Kronecker reference before its timing is
// reported. Progress lines go to `log` when given.
BenchReport run_benchmark(const BenchConfig& config, std::ostream* log = nullptr);
void write_csv(const BenchReport& report, std::ostream& out);

// Multiplies a and b with cvl and schoolbook and, when given, compares with
// an expected product. Exit status: 0 match, 1 mismatch, 2 bad input.
int verify_command(const std::string& a_path, const std::string& b_path,
                   const std::optional<std::string>& expect_path, std::ostream& out, std::ostream& err);

}  // namespace cvl
