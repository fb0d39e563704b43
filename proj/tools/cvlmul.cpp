#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cvl/bench.hpp"
#include "cvl/error.hpp"
#include "cvl/kernels.hpp"

namespace {

int run_bench(const std::string& sweep, const std::string& algorithms, unsigned trials,
              const std::string& workers, std::uint64_t seed, const std::string& out_path, unsigned primes) {
  cvl::BenchConfig cfg;
  cfg.sweep = cvl::parse_sweep(sweep);
  cfg.algorithms = cvl::parse_algorithms(algorithms);
  cfg.trials = trials;
  cfg.worker_counts = cvl::parse_worker_counts(workers);
  cfg.seed = seed;
  cfg.output_path = out_path;
  cfg.prime_count = primes;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw cvl::Error(cvl::ErrorCode::kIo, "cannot write " + out_path);
  }
  const cvl::BenchReport report = cvl::run_benchmark(cfg, &std::cerr);
  cvl::write_csv(report, out_path.empty() ? std::cout : file);
  if (!report.all_correct()) {
    for (const auto& m : report.mismatches) std::cerr << "MISMATCH " << m << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvlmul: dense integer polynomial multiplication"};
  app.require_subcommand(1);
  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel variant: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto* bench = app.add_subcommand("bench", "Timing sweep with CSV output");
  std::string sweep = "d=N:2^9..2^14", algorithms = "cvl,kronecker", workers = "1", out_path;
  unsigned trials = 5, primes = 2;
  std::uint64_t seed = 1;
  bench->add_option("--sweep", sweep, "d=N:2^a..2^b, d=N:v1,v2 or DxN,DxN")->capture_default_str();
  bench->add_option("--algorithms", algorithms, "Subset of cvl,kronecker,schoolbook")->capture_default_str();
  bench->add_option("--trials", trials, "Trials per point")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--workers", workers, "Worker counts, e.g. 1,4,max")->capture_default_str();
  bench->add_option("--seed", seed, "Random seed")->capture_default_str();
  bench->add_option("--primes", primes, "Primes per convolution")->check(CLI::Range(1, 3))->capture_default_str();
  bench->add_option("--out", out_path, "CSV path (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "Check cvl against schoolbook on two input files");
  std::string a_path, b_path, expect_path;
  verify->add_option("a", a_path, "First factor")->required();
  verify->add_option("b", b_path, "Second factor")->required();
  verify->add_option("--expect", expect_path, "Expected product");

  auto* gen = app.add_subcommand("gen", "Write a random dense polynomial");
  std::size_t gen_d = 0, gen_n = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--d", gen_d, "Coefficient count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_n, "Coefficient bits")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (isa != "auto" && !cvl::simd::set_active_isa(isa == "avx2" ? cvl::simd::Isa::kAvx2 : cvl::simd::Isa::kScalar)) {
    std::cerr << "kernel variant " << isa << " is not available on this machine\n";
    return 2;
  }

  try {
    if (*bench) return run_bench(sweep, algorithms, trials, workers, seed, out_path, primes);
    if (*verify) {
      return cvl::verify_command(a_path, b_path,
                                 expect_path.empty() ? std::nullopt : std::optional<std::string>(expect_path),
                                 std::cout, std::cerr);
    }
    if (*gen) {
      const auto p = cvl::generate_random_dense(gen_d, gen_n, gen_seed);
      if (gen_out.empty()) {
        cvl::format_polynomial(p, std::cout);
      } else {
        cvl::write_polynomial_file(p, gen_out);
      }
      return 0;
    }
  } catch (const cvl::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
