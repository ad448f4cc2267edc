// Table selection only; no intrinsics here.
#include <atomic>
#include <stdexcept>
#include <string>

#include "tables.hpp"

namespace qssmm::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QSSMM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() noexcept {
#if defined(QSSMM_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_table();
#endif
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel table '" + std::string(isa_name(isa)) +
                                "' is not available on this machine");
  }
#if defined(QSSMM_HAVE_AVX2)
  if (isa == Isa::Avx2) return detail::avx2_table();
#endif
  return scalar_kernels();
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace qssmm::simd
