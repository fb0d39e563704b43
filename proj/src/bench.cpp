#include "cvl/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "cvl/error.hpp"
#include "cvl/oracle.hpp"

namespace cvl {

namespace {

using Clock = std::chrono::steady_clock;

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  if (s.starts_with("2^")) {
    unsigned e = 0;
    const auto r = std::from_chars(s.data() + 2, s.data() + s.size(), e);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || e > 40) {
      throw Error(ErrorCode::kInvalidArgument, "bad " + std::string(what) + ": " + std::string(s));
    }
    return std::size_t{1} << e;
  }
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || v == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad " + std::string(what) + ": " + std::string(s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

IntPolynomial nonzero_random(std::size_t d, std::size_t N, std::uint64_t seed) {
  for (std::uint64_t s = seed;; s = mix(s)) {
    IntPolynomial p = generate_random_dense(d, N, s);
    if (!p.is_zero()) return p;
  }
}

IntPolynomial run_algorithm(Algorithm alg, const IntPolynomial& a, const IntPolynomial& b, unsigned workers,
                            unsigned prime_count, StageTimings* stages) {
  switch (alg) {
    case Algorithm::kCvl: {
      MulOptions opt;
      opt.worker_hint = workers;
      opt.prime_count = prime_count;
      auto [c, st] = multiply_with_stats(a, b, opt);
      if (stages) *stages = st;
      return c;
    }
    case Algorithm::kKronecker: return kronecker_multiply(a, b);
    case Algorithm::kSchoolbook: return schoolbook_multiply(a, b);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

}  // namespace

IntPolynomial generate_random_dense(std::size_t d, std::size_t N, std::uint64_t seed) {
  if (d == 0 || N == 0) throw Error(ErrorCode::kInvalidArgument, "d and N must be positive");
  std::mt19937_64 rng(seed);
  const std::size_t words = words_for_bits(N);
  const unsigned top_bits = static_cast<unsigned>(N - (words - 1) * kWordBits);
  IntPolynomial out(d, words);
  for (std::size_t i = 0; i < d; ++i) {
    auto c = out.coeff(i);
    for (std::size_t k = 0; k < words; ++k) c[k] = rng();
    // Sign-extend from bit N - 1.
    const unsigned shift = kWordBits - top_bits;
    c[words - 1] = static_cast<u64>(static_cast<i64>(c[words - 1] << shift) >> shift);
  }
  return out;
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kCvl: return "cvl";
    case Algorithm::kKronecker: return "kronecker";
    case Algorithm::kSchoolbook: return "schoolbook";
  }
  return "?";
}

std::vector<SweepPoint> parse_sweep(std::string_view text) {
  std::vector<SweepPoint> out;
  if (text.starts_with("d=N:")) {
    text.remove_prefix(4);
    const auto dots = text.find("..");
    if (dots != std::string_view::npos) {
      const std::size_t lo = parse_count(text.substr(0, dots), "sweep bound");
      const std::size_t hi = parse_count(text.substr(dots + 2), "sweep bound");
      for (std::size_t v = lo; v <= hi; v *= 2) out.push_back({v, v});
    } else {
      for (auto item : split(text, ',')) {
        const std::size_t v = parse_count(item, "sweep size");
        out.push_back({v, v});
      }
    }
  } else {
    for (auto item : split(text, ',')) {
      const auto x = item.find('x');
      if (x == std::string_view::npos) {
        throw Error(ErrorCode::kInvalidArgument, "sweep item must be DxN: " + std::string(item));
      }
      out.push_back({parse_count(item.substr(0, x), "d"), parse_count(item.substr(x + 1), "N")});
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sweep");
  return out;
}

std::vector<unsigned> parse_worker_counts(std::string_view text) {
  std::vector<unsigned> out;
  for (auto item : split(text, ',')) {
    if (item == "max") {
      out.push_back(std::max(1u, std::thread::hardware_concurrency()));
    } else {
      out.push_back(static_cast<unsigned>(parse_count(item, "worker count")));
    }
  }
  return out;
}

std::vector<Algorithm> parse_algorithms(std::string_view text) {
  std::vector<Algorithm> out;
  for (auto item : split(text, ',')) {
    if (item == "cvl") {
      out.push_back(Algorithm::kCvl);
    } else if (item == "kronecker") {
      out.push_back(Algorithm::kKronecker);
    } else if (item == "schoolbook") {
      out.push_back(Algorithm::kSchoolbook);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown algorithm: " + std::string(item));
    }
  }
  return out;
}

BenchReport run_benchmark(const BenchConfig& config, std::ostream* log) {
  if (config.sweep.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sweep");
  if (config.trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  BenchReport report;
  for (std::size_t pi = 0; pi < config.sweep.size(); ++pi) {
    const SweepPoint pt = config.sweep[pi];
    const std::uint64_t base = mix(config.seed ^ mix(pt.d * 0x100000001ULL + pt.N));
    const IntPolynomial a = nonzero_random(pt.d, pt.N, base);
    const IntPolynomial b = nonzero_random(pt.d, pt.N, mix(base));
    const IntPolynomial reference = kronecker_multiply(a, b);
    const u64 ref_hash = polynomial_hash(reference);

    for (Algorithm alg : config.algorithms) {
      std::optional<double> one_worker_median;
      const bool uses_workers = alg == Algorithm::kCvl;
      const std::vector<unsigned> counts = uses_workers ? config.worker_counts : std::vector<unsigned>{1};
      for (unsigned workers : counts) {
        std::vector<double> times;
        std::vector<StageTimings> stages;
        bool ok = true;
        for (unsigned t = 0; t < config.trials; ++t) {
          StageTimings st;
          const auto t0 = Clock::now();
          const IntPolynomial c = run_algorithm(alg, a, b, workers, config.prime_count, &st);
          times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
          stages.push_back(st);
          if (polynomial_hash(c) != ref_hash || !(c == reference)) {
            ok = false;
            std::ostringstream msg;
            msg << algorithm_name(alg) << " d=" << pt.d << " N=" << pt.N << " workers=" << workers
                << " trial=" << t << ": first differing degree " << first_difference(c, reference);
            report.mismatches.push_back(msg.str());
          }
        }
        std::vector<std::size_t> order(times.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return times[x] < times[y]; });
        const std::size_t mid = order[(order.size() - 1) / 2];

        BenchRow row;
        row.point = pt;
        row.algorithm = alg;
        row.workers = workers;
        row.trials = config.trials;
        row.median_ms = times[mid];
        row.min_ms = times[order.front()];
        row.correctness_ok = ok;
        if (alg == Algorithm::kCvl) row.stages = stages[mid];
        if (workers == 1) one_worker_median = row.median_ms;
        if (one_worker_median) row.speedup_vs_1 = *one_worker_median / row.median_ms;
        if (log) {
          *log << algorithm_name(alg) << " d=" << pt.d << " N=" << pt.N << " workers=" << workers
               << " median_ms=" << std::fixed << std::setprecision(3) << row.median_ms
               << (ok ? "" : " MISMATCH") << std::endl;
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
  out << "d,N,algorithm,workers,trials,median_ms,min_ms,correctness_ok,speedup_vs_1,"
         "convert_ms,ntt_forward_ms,pointwise_ms,ntt_inverse_ms,crt_ms,recover_ms\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : report.rows) {
    out << r.point.d << ',' << r.point.N << ',' << algorithm_name(r.algorithm) << ',' << r.workers << ','
        << r.trials << ',' << r.median_ms << ',' << r.min_ms << ',' << (r.correctness_ok ? "true" : "false")
        << ',';
    if (r.speedup_vs_1) out << *r.speedup_vs_1;
    if (r.stages) {
      const auto& s = *r.stages;
      out << ',' << s.convert_ms << ',' << s.ntt_forward_ms << ',' << s.pointwise_ms << ',' << s.ntt_inverse_ms
          << ',' << s.crt_ms << ',' << s.recover_ms;
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
}

int verify_command(const std::string& a_path, const std::string& b_path,
                   const std::optional<std::string>& expect_path, std::ostream& out, std::ostream& err) {
  IntPolynomial a, b;
  std::optional<IntPolynomial> expect;
  try {
    a = read_polynomial_file(a_path);
    b = read_polynomial_file(b_path);
    if (expect_path) expect = read_polynomial_file(*expect_path);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
  IntPolynomial fast, slow;
  try {
    fast = multiply(a, b);
    slow = schoolbook_multiply(a, b);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
  const auto d1 = first_difference(fast, slow);
  if (d1 >= 0) {
    out << "MISMATCH cvl vs schoolbook at degree " << d1 << '\n';
    return 1;
  }
  if (expect) {
    const auto d2 = first_difference(fast, *expect);
    if (d2 >= 0) {
      out << "MISMATCH expected product differs at degree " << d2 << '\n';
      return 1;
    }
  }
  out << "MATCH\n";
  return 0;
}

}  // namespace cvl
