#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "confstl/formula.hpp"
#include "confstl/trace.hpp"

namespace confstl {

/// Raised when a temporal window falls entirely past the end of the trace,
/// the evaluation time is out of range, or atom and trace widths differ.
class EvaluationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quantitative robustness rho(X, phi, t). Temporal windows [t+lo, t+hi] are
/// clamped to the trace end; an empty clamped window is an error.
double eval_robustness(const Formula& f, const Trace& trace, std::size_t t);

/// Robustness at every t in [first, last] (inclusive), computed bottom-up.
std::vector<double> robustness_signal(const Formula& f, const Trace& trace, std::size_t first, std::size_t last);

/// +1 iff rho(X, phi, 0) > 0. A zero robustness classifies as negative.
Label classify(const Formula& f, const Trace& trace);

/// rho(X_i, phi, 0) for every trace of the dataset, in order.
std::vector<double> robustness_at_origin(const Formula& f, const LabeledDataset& data);

inline constexpr int kDefaultTemporalCapacity = 6;

double sigmoid(double x) noexcept;

/// Temporal node count divided by the template capacity.
double complexity(const Formula& f, int capacity = kDefaultTemporalCapacity);

/// sigmoid(mean_i | |rho1_i| - |rho2_i| |).
double distance(const Formula& f1, const Formula& f2, const LabeledDataset& data);
double distance_from_robustness(std::span<const double> r1, std::span<const double> r2);

/// sigmoid(mean_i rho_i).
double quality(const Formula& f, const LabeledDataset& data);
double quality_from_robustness(std::span<const double> r);

/// Fraction of traces whose classification matches the label.
double accuracy(const Formula& f, const LabeledDataset& data);
double accuracy_from_robustness(std::span<const double> r, std::span<const int> labels);

}  // namespace confstl
