#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "confstl/kernels.hpp"
#include "confstl/robustness.hpp"

namespace confstl {
namespace {

// Keeps D in [0.5, 1) and Q in (0, 1) when the logistic saturates in double.
double open_unit(double p) noexcept {
  constexpr double kBelowOne = 1.0 - 0x1p-53;
  return std::clamp(p, std::numeric_limits<double>::denorm_min(), kBelowOne);
}

}  // namespace

double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double complexity(const Formula& f, int capacity) {
  if (capacity <= 0) throw std::invalid_argument("complexity capacity must be positive");
  return static_cast<double>(f.temporal_count()) / static_cast<double>(capacity);
}

double distance_from_robustness(std::span<const double> r1, std::span<const double> r2) {
  if (r1.empty() || r1.size() != r2.size()) throw std::invalid_argument("distance needs equal, non-empty vectors");
  const double gap = kernels::active().abs_gap_sum(r1.data(), r2.data(), r1.size());
  return open_unit(sigmoid(gap / static_cast<double>(r1.size())));
}

double distance(const Formula& f1, const Formula& f2, const LabeledDataset& data) {
  const auto r1 = robustness_at_origin(f1, data);
  const auto r2 = robustness_at_origin(f2, data);
  return distance_from_robustness(r1, r2);
}

double quality_from_robustness(std::span<const double> r) {
  if (r.empty()) throw std::invalid_argument("quality needs a non-empty dataset");
  return open_unit(sigmoid(kernels::active().sum(r.data(), r.size()) / static_cast<double>(r.size())));
}

double quality(const Formula& f, const LabeledDataset& data) { return quality_from_robustness(robustness_at_origin(f, data)); }

double accuracy_from_robustness(std::span<const double> r, std::span<const int> labels) {
  if (r.empty() || r.size() != labels.size()) throw std::invalid_argument("accuracy needs equal, non-empty vectors");
  const std::size_t hits = kernels::active().sign_agreement(r.data(), labels.data(), r.size());
  return static_cast<double>(hits) / static_cast<double>(r.size());
}

double accuracy(const Formula& f, const LabeledDataset& data) {
  return accuracy_from_robustness(robustness_at_origin(f, data), data.label_values());
}

}  // namespace confstl
