#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/kernels_impl.hpp"

namespace ehsense::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(EHSENSE_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

Isa detect_default() {
  if (const char* env = std::getenv("EHSENSE_ISA"); env != nullptr && std::string(env) == "scalar")
    return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect_default()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

const KernelTable& table(Isa isa) {
#if defined(EHSENSE_BUILD_AVX2)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return detail::avx2_table();
#endif
  (void)isa;
  return detail::scalar_table();
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  active_slot().store(isa_available(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

}  // namespace ehsense::kernels
