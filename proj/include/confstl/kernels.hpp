#pragma once

// Data-parallel inner loops shared by the robustness evaluator and the
// learner. Every kernel has a portable scalar version and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at runtime from the CPU feature set; CONFSTL_KERNELS=scalar
// (or avx2 / neon) in the environment overrides the choice.
//
// The vector variants reproduce the scalar evaluation order exactly: sums are
// accumulated in four interleaved partial sums combined as (s0 + s1) + (s2 + s3),
// and the affine kernel accumulates channels in index order without fused
// multiply-add. All backends therefore return bit-identical results.

#include <cstddef>
#include <string_view>

namespace confstl::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;

  // out[t] = sum_c coeffs[c] * x[c * stride + t] - offset, for t in [0, n).
  void (*affine)(const double* x, std::size_t stride, std::size_t channels,
                 const double* coeffs, double offset, double* out, std::size_t n);

  double (*reduce_min)(const double* v, std::size_t n);
  double (*reduce_max)(const double* v, std::size_t n);

  // out[i] = min(out[i], v[i]) / max(out[i], v[i]).
  void (*accumulate_min)(double* out, const double* v, std::size_t n);
  void (*accumulate_max)(double* out, const double* v, std::size_t n);

  double (*sum)(const double* v, std::size_t n);

  // sum_i | |x[i]| - |y[i]| |
  double (*abs_gap_sum)(const double* x, const double* y, std::size_t n);

  // Number of i with (v[i] > 0) == (labels[i] > 0); labels are +1 / -1.
  std::size_t (*sign_agreement)(const double* v, const int* labels, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Resolved on first use.
const KernelTable& active();

// Forces a backend. Returns false (and changes nothing) if unavailable.
bool select(Backend backend);

std::string_view backend_name(Backend backend);

}  // namespace confstl::kernels
