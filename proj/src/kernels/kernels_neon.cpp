#include "confstl/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define CONFSTL_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

#include <cmath>

namespace confstl::kernels {

#if CONFSTL_HAVE_NEON_KERNELS
namespace {

// Two-lane registers; pairs of registers emulate the four partial sums of the
// scalar path so that results stay bit-identical.

void affine(const double* x, std::size_t stride, std::size_t channels, const double* coeffs,
            double offset, double* out, std::size_t n) {
  const float64x2_t off = vdupq_n_f64(offset);
  std::size_t t = 0;
  for (; t + 2 <= n; t += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t c = 0; c < channels; ++c) {
      const float64x2_t prod = vmulq_f64(vdupq_n_f64(coeffs[c]), vld1q_f64(x + c * stride + t));
      acc = vaddq_f64(acc, prod);
    }
    vst1q_f64(out + t, vsubq_f64(acc, off));
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

double reduce_min(const double* v, std::size_t n) {
  double r = v[0];
  std::size_t i = 1;
  if (n >= 2) {
    float64x2_t m = vld1q_f64(v);
    for (i = 2; i + 2 <= n; i += 2) m = vminq_f64(vld1q_f64(v + i), m);
    r = vminvq_f64(m);
  }
  for (; i < n; ++i) r = v[i] < r ? v[i] : r;
  return r;
}

double reduce_max(const double* v, std::size_t n) {
  double r = v[0];
  std::size_t i = 1;
  if (n >= 2) {
    float64x2_t m = vld1q_f64(v);
    for (i = 2; i + 2 <= n; i += 2) m = vmaxq_f64(vld1q_f64(v + i), m);
    r = vmaxvq_f64(m);
  }
  for (; i < n; ++i) r = v[i] > r ? v[i] : r;
  return r;
}

void accumulate_min(double* out, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vminq_f64(vld1q_f64(v + i), vld1q_f64(out + i)));
  for (; i < n; ++i) out[i] = v[i] < out[i] ? v[i] : out[i];
}

void accumulate_max(double* out, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmaxq_f64(vld1q_f64(v + i), vld1q_f64(out + i)));
  for (; i < n; ++i) out[i] = v[i] > out[i] ? v[i] : out[i];
}

double sum(const double* v, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);  // lanes 0, 1
  float64x2_t hi = vdupq_n_f64(0.0);  // lanes 2, 3
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(v + i));
    hi = vaddq_f64(hi, vld1q_f64(v + i + 2));
  }
  double s[4];
  vst1q_f64(s, lo);
  vst1q_f64(s + 2, hi);
  for (std::size_t lane = 0; i < n; ++i, ++lane) s[lane] += v[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double abs_gap_sum(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vabsq_f64(vsubq_f64(vabsq_f64(vld1q_f64(x + i)), vabsq_f64(vld1q_f64(y + i)))));
    hi = vaddq_f64(hi, vabsq_f64(vsubq_f64(vabsq_f64(vld1q_f64(x + i + 2)), vabsq_f64(vld1q_f64(y + i + 2)))));
  }
  double s[4];
  vst1q_f64(s, lo);
  vst1q_f64(s + 2, hi);
  for (std::size_t lane = 0; i < n; ++i, ++lane) s[lane] += std::fabs(std::fabs(x[i]) - std::fabs(y[i]));
  return (s[0] + s[1]) + (s[2] + s[3]);
}

std::size_t sign_agreement(const double* v, const int* labels, std::size_t n) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += ((v[i] > 0.0) == (labels[i] > 0)) ? 1 : 0;
  return hits;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{Backend::Neon,  affine, reduce_min,  reduce_max,    accumulate_min,
                                 accumulate_max, sum,    abs_gap_sum, sign_agreement};
  return &table;
}

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace confstl::kernels
