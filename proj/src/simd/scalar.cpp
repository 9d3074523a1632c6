#include <cmath>

#include "simd/tables.hpp"

namespace contra::simd::scalar {

namespace {

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) axpy(a[i * lda + p], b + p * ldb, c + i * ldc, n);
  }
}

template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * ldc + j] += dot(a + i * lda, b + j * ldb, k);
  }
}

template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t i = 0; i < m; ++i) axpy(a[p * lda + i], b + p * ldb, c + i * ldc, n);
  }
}

template <typename T>
void momentum_blend(T* target, const T* online, double m, std::size_t n) {
  const double keep = m;
  const double take = 1.0 - m;
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = static_cast<T>(keep * static_cast<double>(target[i]) +
                               take * static_cast<double>(online[i]));
  }
}

template <typename T>
void adam(T* param, const T* grad, T* first, T* second, std::size_t n, const AdamStep& s) {
  const T b1 = static_cast<T>(s.beta1);
  const T b2 = static_cast<T>(s.beta2);
  const T c1 = static_cast<T>(1.0 - s.beta1);
  const T c2 = static_cast<T>(1.0 - s.beta2);
  const T step = static_cast<T>(s.lr / s.bias1);
  const T inv_bias2 = static_cast<T>(1.0 / s.bias2);
  const T eps = static_cast<T>(s.eps);
  for (std::size_t i = 0; i < n; ++i) {
    const T g = grad[i];
    first[i] = b1 * first[i] + c1 * g;
    second[i] = b2 * second[i] + c2 * (g * g);
    param[i] -= step * first[i] / (std::sqrt(second[i] * inv_bias2) + eps);
  }
}

template <typename T>
constexpr Kernels<T> make_table() {
  return Kernels<T>{&dot<T>,     &axpy<T>,           &gemm_nn<T>, &gemm_nt<T>,
                    &gemm_tn<T>, &momentum_blend<T>, &adam<T>};
}

}  // namespace

const Kernels<float> kF32 = make_table<float>();
const Kernels<double> kF64 = make_table<double>();

}  // namespace contra::simd::scalar
