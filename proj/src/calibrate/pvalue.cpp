#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "confstl/calibrate.hpp"

namespace confstl {

double binomial_cdf(int failures, int k_total, double epsilon) {
  if (k_total < 1) throw std::invalid_argument("binomial p-value needs K >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (failures < 0) return 0.0;
  if (failures >= k_total) return 1.0;
  const double n = k_total;
  const double log_eps = std::log(epsilon);
  const double log_comp = std::log1p(-epsilon);
  const double log_nfact = std::lgamma(n + 1.0);
  std::vector<double> terms(static_cast<std::size_t>(failures) + 1);
  for (int i = 0; i <= failures; ++i) {
    terms[static_cast<std::size_t>(i)] = log_nfact - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * log_eps +
                                         (n - i) * log_comp;
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return std::min(1.0, std::exp(top + std::log(sum)));
}

double binomial_pvalue(double risk_hat, int k_total, double epsilon) {
  if (k_total < 1) throw std::invalid_argument("binomial p-value needs K >= 1");
  if (!(risk_hat >= 0.0 && risk_hat <= 1.0)) throw std::invalid_argument("risk estimate must lie in [0,1]");
  const double count = risk_hat * k_total;
  const double rounded = std::round(count);
  if (std::fabs(count - rounded) > 1e-9) throw std::invalid_argument("risk estimate is not a count over K");
  return binomial_cdf(static_cast<int>(rounded), k_total, epsilon);
}

}  // namespace confstl
