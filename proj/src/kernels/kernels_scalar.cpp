#include "confstl/kernels.hpp"

#include <cmath>

namespace confstl::kernels {
namespace {

void affine(const double* x, std::size_t stride, std::size_t channels, const double* coeffs,
            double offset, double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const double prod = coeffs[c] * x[c * stride + t];
      acc = acc + prod;
    }
    out[t] = acc - offset;
  }
}

double reduce_min(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) m = v[i] < m ? v[i] : m;
  return m;
}

double reduce_max(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) m = v[i] > m ? v[i] : m;
  return m;
}

void accumulate_min(double* out, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] < out[i] ? v[i] : out[i];
}

void accumulate_max(double* out, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] > out[i] ? v[i] : out[i];
}

double sum(const double* v, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s[0] += v[i];
    s[1] += v[i + 1];
    s[2] += v[i + 2];
    s[3] += v[i + 3];
  }
  for (std::size_t lane = 0; i < n; ++i, ++lane) s[lane] += v[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double abs_gap_sum(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      s[lane] += std::fabs(std::fabs(x[i + lane]) - std::fabs(y[i + lane]));
    }
  }
  for (std::size_t lane = 0; i < n; ++i, ++lane) {
    s[lane] += std::fabs(std::fabs(x[i]) - std::fabs(y[i]));
  }
  return (s[0] + s[1]) + (s[2] + s[3]);
}

std::size_t sign_agreement(const double* v, const int* labels, std::size_t n) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += ((v[i] > 0.0) == (labels[i] > 0)) ? 1 : 0;
  return hits;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::Scalar, affine,    reduce_min,  reduce_max,     accumulate_min,
                                 accumulate_max,  sum,       abs_gap_sum, sign_agreement};
  return table;
}

}  // namespace confstl::kernels
