#pragma once

// Binomial CDF by direct summation in 100-digit floating point.

#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ref {

/// cdf[f] = Pr(Bin(k_total, epsilon) <= f) for f = 0..k_total.
inline std::vector<double> binomial_cdf_table_mp(int k_total, double epsilon) {
  using Real = boost::multiprecision::cpp_bin_float_100;
  const Real e(epsilon);  // the double value, exactly
  const Real q = Real(1) - e;
  Real term = boost::multiprecision::pow(q, k_total);
  Real total = 0;
  std::vector<double> cdf;
  for (int i = 0; i <= k_total; ++i) {
    if (i > 0) term = term * (k_total - i + 1) / i * e / q;
    total += term;
    cdf.push_back(static_cast<double>(total));
  }
  return cdf;
}

inline double binomial_cdf_mp(int failures, int k_total, double epsilon) {
  if (failures < 0) return 0.0;
  if (failures >= k_total) return 1.0;
  return binomial_cdf_table_mp(k_total, epsilon)[static_cast<std::size_t>(failures)];
}

}  // namespace ref
