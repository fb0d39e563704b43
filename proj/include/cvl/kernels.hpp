#pragma once

// Data-parallel inner loops of the transforms. Every kernel exists as a
// scalar reference and, where the CPU allows, an AVX2 variant; the active
// table is picked at runtime. All inputs and outputs are canonical residues
// in [0, p) with p < 2^63, so every variant produces bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cvl::simd {

using u64 = std::uint64_t;
using i64 = std::int64_t;

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  Isa isa;
  const char* name;

  // x, y <- x + y, (x - y) * w                 (decimation in frequency)
  void (*dif_bcast)(u64* x, u64* y, std::size_t n, u64 w, u64 w_shoup, u64 p);
  // x, y <- x + y * w, x - y * w               (decimation in time)
  void (*dit_bcast)(u64* x, u64* y, std::size_t n, u64 w, u64 w_shoup, u64 p);
  // As above with one twiddle per element.
  void (*dif_twiddle)(u64* x, u64* y, std::size_t n, const u64* w, const u64* w_shoup, u64 p);
  void (*dit_twiddle)(u64* x, u64* y, std::size_t n, const u64* w, const u64* w_shoup, u64 p);
  // x <- x * y * 2^-64 mod p
  void (*mont_mul)(u64* x, const u64* y, std::size_t n, u64 p, u64 p_inv);
  // x <- x * w
  void (*scale_twiddle)(u64* x, std::size_t n, const u64* w, const u64* w_shoup, u64 p);
  void (*scale_bcast)(u64* x, std::size_t n, u64 w, u64 w_shoup, u64 p);
  // dst <- src * w
  void (*scale_bcast_to)(u64* dst, const u64* src, std::size_t n, u64 w, u64 w_shoup, u64 p);
  // Final two DIF stages / first two DIT stages over n / 4 blocks of four;
  // w is the root of order 4 (forward or inverse).
  void (*dif_tail4)(u64* x, std::size_t n, u64 w, u64 w_shoup, u64 p);
  void (*dit_head4)(u64* x, std::size_t n, u64 w, u64 w_shoup, u64 p);
  // dst <- digit mod p for |digit| < p
  void (*embed)(u64* dst, const i64* digits, std::size_t n, u64 p);
};

const Kernels& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Best available table unless overridden with set_active_isa.
const Kernels& active_kernels();
// Returns false (and changes nothing) if the ISA is unavailable.
bool set_active_isa(Isa isa);
std::vector<Isa> available_isas();
std::string_view isa_name(Isa isa);

}  // namespace cvl::simd
