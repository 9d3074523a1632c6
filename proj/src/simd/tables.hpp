#pragma once

#include "contra/simd/kernels.hpp"

namespace contra::simd {

namespace scalar {
extern const Kernels<float> kF32;
extern const Kernels<double> kF64;
}  // namespace scalar

#ifdef CONTRA_HAVE_AVX2
namespace avx2 {
extern const Kernels<float> kF32;
extern const Kernels<double> kF64;
}  // namespace avx2
#endif

}  // namespace contra::simd
