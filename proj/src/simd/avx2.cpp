// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// CPU check.

#include <immintrin.h>

#include <cmath>
#include <vector>

#include "simd/tables.hpp"

namespace contra::simd::avx2 {

namespace {

template <typename T>
struct Vec;

template <>
struct Vec<float> {
  using reg = __m256;
  static constexpr std::size_t width = 8;
  static reg load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, reg v) { _mm256_storeu_ps(p, v); }
  static reg set1(float x) { return _mm256_set1_ps(x); }
  static reg zero() { return _mm256_setzero_ps(); }
  static reg fmadd(reg a, reg b, reg c) { return _mm256_fmadd_ps(a, b, c); }
  static reg add(reg a, reg b) { return _mm256_add_ps(a, b); }
  static reg mul(reg a, reg b) { return _mm256_mul_ps(a, b); }
  static reg div(reg a, reg b) { return _mm256_div_ps(a, b); }
  static reg sub(reg a, reg b) { return _mm256_sub_ps(a, b); }
  static reg sqrt(reg a) { return _mm256_sqrt_ps(a); }
  static float hsum(reg v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 sh = _mm_movehdup_ps(lo);
    __m128 s = _mm_add_ps(lo, sh);
    sh = _mm_movehl_ps(sh, s);
    s = _mm_add_ss(s, sh);
    return _mm_cvtss_f32(s);
  }
};

template <>
struct Vec<double> {
  using reg = __m256d;
  static constexpr std::size_t width = 4;
  static reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }
  static reg set1(double x) { return _mm256_set1_pd(x); }
  static reg zero() { return _mm256_setzero_pd(); }
  static reg fmadd(reg a, reg b, reg c) { return _mm256_fmadd_pd(a, b, c); }
  static reg add(reg a, reg b) { return _mm256_add_pd(a, b); }
  static reg mul(reg a, reg b) { return _mm256_mul_pd(a, b); }
  static reg div(reg a, reg b) { return _mm256_div_pd(a, b); }
  static reg sub(reg a, reg b) { return _mm256_sub_pd(a, b); }
  static reg sqrt(reg a) { return _mm256_sqrt_pd(a); }
  static double hsum(reg v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
  }
};

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
  using V = Vec<T>;
  constexpr std::size_t w = V::width;
  auto s0 = V::zero(), s1 = V::zero(), s2 = V::zero(), s3 = V::zero();
  std::size_t i = 0;
  for (; i + 4 * w <= n; i += 4 * w) {
    s0 = V::fmadd(V::load(a + i), V::load(b + i), s0);
    s1 = V::fmadd(V::load(a + i + w), V::load(b + i + w), s1);
    s2 = V::fmadd(V::load(a + i + 2 * w), V::load(b + i + 2 * w), s2);
    s3 = V::fmadd(V::load(a + i + 3 * w), V::load(b + i + 3 * w), s3);
  }
  for (; i + w <= n; i += w) s0 = V::fmadd(V::load(a + i), V::load(b + i), s0);
  T s = V::hsum(V::add(V::add(s0, s1), V::add(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  using V = Vec<T>;
  constexpr std::size_t w = V::width;
  const auto va = V::set1(alpha);
  std::size_t i = 0;
  for (; i + w <= n; i += w) V::store(y + i, V::fmadd(va, V::load(x + i), V::load(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// C[i, j0:j0+4w] accumulates sum_p a(i, p) * B[p, j0:...] with the C block held
// in registers across the whole p loop. `a_at(i, p)` hides the layout of A.
template <typename T, typename AAt>
void gemm_rows(std::size_t m, std::size_t n, std::size_t k, AAt a_at, const T* b, std::size_t ldb,
               T* c, std::size_t ldc) {
  using V = Vec<T>;
  constexpr std::size_t w = V::width;
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * ldc;
    std::size_t j = 0;
    for (; j + 4 * w <= n; j += 4 * w) {
      auto c0 = V::load(crow + j), c1 = V::load(crow + j + w);
      auto c2 = V::load(crow + j + 2 * w), c3 = V::load(crow + j + 3 * w);
      for (std::size_t p = 0; p < k; ++p) {
        const auto av = V::set1(a_at(i, p));
        const T* brow = b + p * ldb + j;
        c0 = V::fmadd(av, V::load(brow), c0);
        c1 = V::fmadd(av, V::load(brow + w), c1);
        c2 = V::fmadd(av, V::load(brow + 2 * w), c2);
        c3 = V::fmadd(av, V::load(brow + 3 * w), c3);
      }
      V::store(crow + j, c0);
      V::store(crow + j + w, c1);
      V::store(crow + j + 2 * w, c2);
      V::store(crow + j + 3 * w, c3);
    }
    for (; j + w <= n; j += w) {
      auto c0 = V::load(crow + j);
      for (std::size_t p = 0; p < k; ++p) c0 = V::fmadd(V::set1(a_at(i, p)), V::load(b + p * ldb + j), c0);
      V::store(crow + j, c0);
    }
    for (; j < n; ++j) {
      T s = crow[j];
      for (std::size_t p = 0; p < k; ++p) s += a_at(i, p) * b[p * ldb + j];
      crow[j] = s;
    }
  }
}

template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  gemm_rows<T>(m, n, k, [a, lda](std::size_t i, std::size_t p) { return a[i * lda + p]; }, b, ldb, c,
               ldc);
}

template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  gemm_rows<T>(m, n, k, [a, lda](std::size_t i, std::size_t p) { return a[p * lda + i]; }, b, ldb, c,
               ldc);
}

template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
             std::size_t ldb, T* c, std::size_t ldc) {
  // Transposing B once lets the register-blocked kernel stream its rows.
  thread_local std::vector<T> bt;
  bt.resize(k * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = b[j * ldb + p];
  }
  gemm_rows<T>(m, n, k, [a, lda](std::size_t i, std::size_t p) { return a[i * lda + p]; }, bt.data(), n, c,
               ldc);
}

void momentum_blend_f32(float* target, const float* online, double m, std::size_t n) {
  const __m256d keep = _mm256_set1_pd(m);
  const __m256d take = _mm256_set1_pd(1.0 - m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_cvtps_pd(_mm_loadu_ps(target + i));
    const __m256d o = _mm256_cvtps_pd(_mm_loadu_ps(online + i));
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(keep, t), _mm256_mul_pd(take, o));
    _mm_storeu_ps(target + i, _mm256_cvtpd_ps(r));
  }
  for (; i < n; ++i) {
    target[i] = static_cast<float>(m * static_cast<double>(target[i]) +
                                   (1.0 - m) * static_cast<double>(online[i]));
  }
}

void momentum_blend_f64(double* target, const double* online, double m, std::size_t n) {
  const __m256d keep = _mm256_set1_pd(m);
  const __m256d take = _mm256_set1_pd(1.0 - m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(keep, _mm256_loadu_pd(target + i)),
                                    _mm256_mul_pd(take, _mm256_loadu_pd(online + i)));
    _mm256_storeu_pd(target + i, r);
  }
  for (; i < n; ++i) target[i] = m * target[i] + (1.0 - m) * online[i];
}

template <typename T>
void adam(T* param, const T* grad, T* first, T* second, std::size_t n, const AdamStep& s) {
  using V = Vec<T>;
  constexpr std::size_t w = V::width;
  const T b1 = static_cast<T>(s.beta1);
  const T b2 = static_cast<T>(s.beta2);
  const T c1 = static_cast<T>(1.0 - s.beta1);
  const T c2 = static_cast<T>(1.0 - s.beta2);
  const T step = static_cast<T>(s.lr / s.bias1);
  const T inv_bias2 = static_cast<T>(1.0 / s.bias2);
  const T eps = static_cast<T>(s.eps);
  const auto vb1 = V::set1(b1), vb2 = V::set1(b2), vc1 = V::set1(c1), vc2 = V::set1(c2);
  const auto vstep = V::set1(step), vib2 = V::set1(inv_bias2), veps = V::set1(eps);
  std::size_t i = 0;
  // Same operation order as the scalar kernel and no fused ops, so results
  // match it bit for bit.
  for (; i + w <= n; i += w) {
    const auto g = V::load(grad + i);
    const auto f = V::add(V::mul(vb1, V::load(first + i)), V::mul(vc1, g));
    const auto q = V::add(V::mul(vb2, V::load(second + i)), V::mul(vc2, V::mul(g, g)));
    V::store(first + i, f);
    V::store(second + i, q);
    const auto denom = V::add(V::sqrt(V::mul(q, vib2)), veps);
    V::store(param + i, V::sub(V::load(param + i), V::div(V::mul(vstep, f), denom)));
  }
  for (; i < n; ++i) {
    const T g = grad[i];
    first[i] = b1 * first[i] + c1 * g;
    second[i] = b2 * second[i] + c2 * (g * g);
    param[i] -= step * first[i] / (std::sqrt(second[i] * inv_bias2) + eps);
  }
}

}  // namespace

const Kernels<float> kF32{&dot<float>,     &axpy<float>,       &gemm_nn<float>, &gemm_nt<float>,
                          &gemm_tn<float>, &momentum_blend_f32, &adam<float>};
const Kernels<double> kF64{&dot<double>,     &axpy<double>,      &gemm_nn<double>, &gemm_nt<double>,
                           &gemm_tn<double>, &momentum_blend_f64, &adam<double>};

}  // namespace contra::simd::avx2
