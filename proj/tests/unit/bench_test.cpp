#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cvl/bench.hpp"
#include "cvl/error.hpp"
#include "cvl/oracle.hpp"

using namespace cvl;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    char tmpl[] = "/tmp/cvl_test_XXXXXX";
    path_ = mkdtemp(tmpl);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string strip_timing_columns(const std::string& csv) {
  // keep d, N, algorithm, workers, trials, correctness_ok
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    for (int i : {0, 1, 2, 3, 4, 7}) out += f.at(i) + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(GenerateRandomDense, Deterministic) {
  EXPECT_EQ(generate_random_dense(100, 300, 7), generate_random_dense(100, 300, 7));
  EXPECT_NE(generate_random_dense(100, 300, 7), generate_random_dense(100, 300, 8));
}

TEST(GenerateRandomDense, Range) {
  const auto p = generate_random_dense(4, 8, 1);
  ASSERT_EQ(p.length(), 4u);
  for (const auto& v : to_mpz(p)) {
    EXPECT_GE(v, -128);
    EXPECT_LE(v, 127);
  }
  for (std::size_t N : {1u, 63u, 64u, 65u, 130u}) {
    const auto q = generate_random_dense(200, N, N);
    EXPECT_LE(q.bit_width(), N);
  }
}

TEST(GenerateRandomDense, MeanWithinThreeSigma) {
  const std::size_t n = 10000, N = 8;
  const auto p = generate_random_dense(n, N, 99);
  double sum = 0;
  for (const auto& v : to_mpz(p)) sum += v.get_d();
  const double mean = sum / n;
  const double range = std::ldexp(1.0, N);
  const double sigma = std::sqrt((range * range - 1) / 12.0 / n);
  EXPECT_NEAR(mean, -0.5, 3 * sigma);
}

TEST(BenchParsing, Sweep) {
  const auto s = parse_sweep("d=N:2^9..2^11");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].d, 512u);
  EXPECT_EQ(s[2].N, 2048u);
  const auto t = parse_sweep("d=N:10,20");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1].d, 20u);
  const auto u = parse_sweep("16x100,32x7");
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[0].d, 16u);
  EXPECT_EQ(u[0].N, 100u);
  EXPECT_THROW(parse_sweep(""), Error);
  EXPECT_THROW(parse_sweep("d=N:2^x"), Error);
}

TEST(BenchParsing, WorkersAndAlgorithms) {
  const auto w = parse_worker_counts("1,4,max");
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], 1u);
  EXPECT_EQ(w[1], 4u);
  EXPECT_GE(w[2], 1u);
  const auto a = parse_algorithms("cvl,kronecker,schoolbook");
  EXPECT_EQ(a, (std::vector<Algorithm>{Algorithm::kCvl, Algorithm::kKronecker, Algorithm::kSchoolbook}));
  EXPECT_THROW(parse_algorithms("fft"), Error);
}

TEST(RunBenchmark, SmallSweepAllCorrect) {
  BenchConfig c;
  c.sweep = {{256, 256}};
  c.algorithms = {Algorithm::kCvl, Algorithm::kKronecker, Algorithm::kSchoolbook};
  c.trials = 2;
  c.worker_counts = {1, 2};
  const BenchReport r = run_benchmark(c);
  EXPECT_TRUE(r.all_correct());
  ASSERT_EQ(r.rows.size(), 4u);  // worker counts apply to cvl only
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.correctness_ok);
    EXPECT_EQ(row.trials, 2u);
    EXPECT_LE(row.min_ms, row.median_ms);
    EXPECT_EQ(row.stages.has_value(), row.algorithm == Algorithm::kCvl);
  }
}

TEST(RunBenchmark, CsvDeterministicApartFromTimings) {
  BenchConfig c;
  c.sweep = {{64, 100}, {128, 50}};
  c.trials = 1;
  c.seed = 17;
  std::ostringstream a, b;
  write_csv(run_benchmark(c), a);
  write_csv(run_benchmark(c), b);
  EXPECT_EQ(strip_timing_columns(a.str()), strip_timing_columns(b.str()));
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "d,N,algorithm,workers,trials,median_ms,min_ms,correctness_ok,speedup_vs_1,convert_ms,"
            "ntt_forward_ms,pointwise_ms,ntt_inverse_ms,crt_ms,recover_ms");
}

TEST(RunBenchmark, InvalidConfig) {
  BenchConfig c;
  EXPECT_THROW(run_benchmark(c), Error);
  c.sweep = {{4, 4}};
  c.trials = 0;
  EXPECT_THROW(run_benchmark(c), Error);
}

TEST(VerifyCommand, ExitCodes) {
  TempDir dir;
  const auto a = generate_random_dense(20, 90, 1), b = generate_random_dense(30, 70, 2);
  write_polynomial_file(a, dir.file("a.poly"));
  write_polynomial_file(b, dir.file("b.poly"));
  auto c = schoolbook_multiply(a, b);
  write_polynomial_file(c, dir.file("c.poly"));
  std::vector<i64> bumped(c.length(), 0);
  bumped[17] = 1;
  const auto wrong = IntPolynomial::from_int64(bumped);
  auto bad = schoolbook_multiply(a, b);
  {
    auto m = to_mpz(bad);
    m[17] += 1;
    write_polynomial_file(from_mpz(m), dir.file("bad.poly"));
  }
  std::ofstream(dir.file("junk.poly")) << "d=2\n1\nnope\n";

  std::ostringstream out, err;
  EXPECT_EQ(verify_command(dir.file("a.poly"), dir.file("b.poly"), std::nullopt, out, err), 0);
  EXPECT_NE(out.str().find("MATCH"), std::string::npos);
  EXPECT_EQ(verify_command(dir.file("a.poly"), dir.file("b.poly"), dir.file("c.poly"), out, err), 0);
  std::ostringstream out1;
  EXPECT_EQ(verify_command(dir.file("a.poly"), dir.file("b.poly"), dir.file("bad.poly"), out1, err), 1);
  EXPECT_NE(out1.str().find("17"), std::string::npos) << out1.str();
  EXPECT_EQ(verify_command(dir.file("junk.poly"), dir.file("b.poly"), std::nullopt, out, err), 2);
  EXPECT_EQ(verify_command(dir.file("missing.poly"), dir.file("b.poly"), std::nullopt, out, err), 2);
}

TEST(Cli, GenVerifyBench) {
  TempDir dir;
  const std::string exe = CVLMUL_PATH;
  ASSERT_EQ(run(exe + " gen --d 40 --n 100 --seed 3 --out " + dir.file("a.poly")), 0);
  ASSERT_EQ(run(exe + " gen --d 25 --n 64 --seed 4 --out " + dir.file("b.poly")), 0);
  EXPECT_EQ(read_polynomial_file(dir.file("a.poly")), generate_random_dense(40, 100, 3));
  EXPECT_EQ(run(exe + " verify " + dir.file("a.poly") + " " + dir.file("b.poly")), 0);

  auto m = to_mpz(schoolbook_multiply(read_polynomial_file(dir.file("a.poly")),
                                      read_polynomial_file(dir.file("b.poly"))));
  m[3] -= 1;
  write_polynomial_file(from_mpz(m), dir.file("bad.poly"));
  EXPECT_EQ(run(exe + " verify " + dir.file("a.poly") + " " + dir.file("b.poly") + " --expect " +
                dir.file("bad.poly")),
            1);
  std::ofstream(dir.file("junk.poly")) << "garbage\n";
  EXPECT_EQ(run(exe + " verify " + dir.file("junk.poly") + " " + dir.file("b.poly")), 2);

  const std::string csv = dir.file("out.csv");
  ASSERT_EQ(run(exe + " bench --sweep d=N:2^6..2^7 --algorithms cvl,kronecker,schoolbook --trials 1 "
                      "--workers 1,2 --seed 5 --out " + csv),
            0);
  std::ifstream in(csv);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 8);
  EXPECT_NE(run(exe + " bench --sweep nonsense"), 0);
  EXPECT_EQ(run(exe + " --isa scalar verify " + dir.file("a.poly") + " " + dir.file("b.poly")), 0);
}
