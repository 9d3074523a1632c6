#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "simd/tables.hpp"

namespace contra::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(CONTRA_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

namespace {

Isa initial_isa() {
  const char* env = std::getenv("CONTRA_SIMD");
  if (env != nullptr) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD variant not available: " + std::string(to_string(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

template <>
const Kernels<float>& kernels<float>(Isa isa) {
#ifdef CONTRA_HAVE_AVX2
  if (isa == Isa::Avx2) return avx2::kF32;
#endif
  (void)isa;
  return scalar::kF32;
}

template <>
const Kernels<double>& kernels<double>(Isa isa) {
#ifdef CONTRA_HAVE_AVX2
  if (isa == Isa::Avx2) return avx2::kF64;
#endif
  (void)isa;
  return scalar::kF64;
}

}  // namespace contra::simd
