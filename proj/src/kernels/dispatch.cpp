#include <atomic>

#include "cvl/kernels.hpp"

namespace cvl::simd {

#if defined(CVL_HAVE_AVX2)
const Kernels* avx2_kernels_unchecked();
#endif

const Kernels* avx2_kernels() {
#if defined(CVL_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* best_available() {
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& active_slot() {
  static std::atomic<const Kernels*> slot{best_available()};
  return slot;
}

}  // namespace

const Kernels& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

bool set_active_isa(Isa isa) {
  const Kernels* k = isa == Isa::kAvx2 ? avx2_kernels() : &scalar_kernels();
  if (k == nullptr) return false;
  active_slot().store(k, std::memory_order_release);
  return true;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out = {Isa::kScalar};
  if (avx2_kernels() != nullptr) out.push_back(Isa::kAvx2);
  return out;
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace cvl::simd
