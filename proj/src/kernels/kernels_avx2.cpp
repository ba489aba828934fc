#include "confstl/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define CONFSTL_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

#include <cmath>

namespace confstl::kernels {

#if CONFSTL_HAVE_AVX2_KERNELS
namespace {

#define CONFSTL_AVX2 __attribute__((target("avx2")))

CONFSTL_AVX2 void affine(const double* x, std::size_t stride, std::size_t channels,
                         const double* coeffs, double offset, double* out, std::size_t n) {
  const __m256d off = _mm256_set1_pd(offset);
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < channels; ++c) {
      const __m256d prod = _mm256_mul_pd(_mm256_set1_pd(coeffs[c]), _mm256_loadu_pd(x + c * stride + t));
      acc = _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(out + t, _mm256_sub_pd(acc, off));
  }
  for (; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const double prod = coeffs[c] * x[c * stride + t];
      acc = acc + prod;
    }
    out[t] = acc - offset;
  }
}

// Lane-wise reductions keep the scalar left-to-right semantics only for
// min/max, which are order independent for non-NaN input.
CONFSTL_AVX2 double reduce_min(const double* v, std::size_t n) {
  if (n < 4) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i) m = v[i] < m ? v[i] : m;
    return m;
  }
  __m256d m = _mm256_loadu_pd(v);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) m = _mm256_min_pd(_mm256_loadu_pd(v + i), m);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) r = lanes[k] < r ? lanes[k] : r;
  for (; i < n; ++i) r = v[i] < r ? v[i] : r;
  return r;
}

CONFSTL_AVX2 double reduce_max(const double* v, std::size_t n) {
  if (n < 4) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i) m = v[i] > m ? v[i] : m;
    return m;
  }
  __m256d m = _mm256_loadu_pd(v);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(_mm256_loadu_pd(v + i), m);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) r = lanes[k] > r ? lanes[k] : r;
  for (; i < n; ++i) r = v[i] > r ? v[i] : r;
  return r;
}

CONFSTL_AVX2 void accumulate_min(double* out, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) out[i] = v[i] < out[i] ? v[i] : out[i];
}

CONFSTL_AVX2 void accumulate_max(double* out, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) out[i] = v[i] > out[i] ? v[i] : out[i];
}

CONFSTL_AVX2 double combine(__m256d acc, const double* tail, std::size_t tail_n) {
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (std::size_t lane = 0; lane < tail_n; ++lane) s[lane] += tail[lane];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

CONFSTL_AVX2 double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  return combine(acc, v + i, n - i);
}

CONFSTL_AVX2 double abs_gap_sum(const double* x, const double* y, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
    const __m256d ay = _mm256_andnot_pd(sign, _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, _mm256_sub_pd(ax, ay)));
  }
  double tail[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t lane = 0; i < n; ++i, ++lane) tail[lane] = std::fabs(std::fabs(x[i]) - std::fabs(y[i]));
  return combine(acc, tail, 4);
}

CONFSTL_AVX2 std::size_t sign_agreement(const double* v, const int* labels, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pos_v = _mm256_cmp_pd(_mm256_loadu_pd(v + i), zero, _CMP_GT_OQ);
    const __m128i lab = _mm_loadu_si128(reinterpret_cast<const __m128i*>(labels + i));
    const __m256d pos_l = _mm256_cmp_pd(_mm256_cvtepi32_pd(lab), zero, _CMP_GT_OQ);
    const int agree = ~_mm256_movemask_pd(_mm256_xor_pd(pos_v, pos_l)) & 0xF;
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(agree)));
  }
  for (; i < n; ++i) hits += ((v[i] > 0.0) == (labels[i] > 0)) ? 1 : 0;
  return hits;
}

#undef CONFSTL_AVX2

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Backend::Avx2, affine,    reduce_min,  reduce_max,     accumulate_min,
                                 accumulate_max, sum,       abs_gap_sum, sign_agreement};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace confstl::kernels
