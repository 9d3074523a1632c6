#pragma once

// Dense kernels used by the encoder. Every kernel has a portable scalar
// reference and, on x86-64, an AVX2/FMA variant. The variant is chosen once
// at runtime from the CPU's capabilities; CONTRA_SIMD=scalar|avx2 overrides.
//
// All matrices are row-major with explicit leading dimensions, and every
// gemm accumulates into C.

#include <cstddef>
#include <string_view>

namespace contra::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct AdamStep {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double bias1 = 1.0;  // 1 - beta1^t
  double bias2 = 1.0;  // 1 - beta2^t
};

template <typename T>
struct Kernels {
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
                  const T* b, std::size_t ldb, T* c, std::size_t ldc);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
                  const T* b, std::size_t ldb, T* c, std::size_t ldc);
  // C[m x n] += A[k x m]^T * B[k x n]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
                  const T* b, std::size_t ldb, T* c, std::size_t ldc);
  // target <- m * target + (1 - m) * online, each element evaluated in double
  // and rounded once to T.
  void (*momentum_blend)(T* target, const T* online, double m, std::size_t n);
  void (*adam)(T* param, const T* grad, T* first, T* second, std::size_t n, const AdamStep& step);
};

bool isa_available(Isa isa);

// Best variant the CPU and the build both support.
Isa detected_isa();

Isa active_isa();
// Throws std::invalid_argument when the variant is not available.
void set_active_isa(Isa isa);

template <typename T>
const Kernels<T>& kernels(Isa isa);

template <typename T>
const Kernels<T>& kernels() {
  return kernels<T>(active_isa());
}

}  // namespace contra::simd
