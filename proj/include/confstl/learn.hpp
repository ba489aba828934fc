#pragma once

// Differentiable STL template learner.
//
// Template: K predicate modules (a_k . z_t - b_k), each feeding one temporal
// module that blends a soft Always and a soft Eventually over a soft time
// window, and a single output Boolean module that blends a soft And and a soft
// Or over the K branches with per-branch selection weights. z_t is the trace
// standardized per channel; hardening folds the standardization back into the
// atom so the discrete formula reads raw KPI values.
//
// Soft max over values v with non-negative weights w:
//   smax_w(v) = (1/tau) log( sum_i w_i exp(tau v_i) )
// and smin_w(v) = -smax_w(-v). The Boolean module uses the selection
// probabilities as w directly; temporal modules use the time mask divided by
// its sum. With 0/1 weights either form is within log(n)/tau of the hard
// extreme over the n selected entries.

#include <cstdint>
#include <span>
#include <vector>

#include "confstl/formula.hpp"
#include "confstl/trace.hpp"

namespace confstl::learn {

struct TemplateConfig {
  int num_predicates = 6;
  int num_temporal = 6;
  int trace_length = 61;
  int channels = 2;
  double temperature = 10.0;
  // Slope of the logistic edges of the soft time mask, per time step.
  double mask_sharpness = 2.0;
  double learning_rate = 0.1;
  int batch_size = 512;
  int epochs = 5;
  double margin = 0.1;          // beta
  double margin_weight = 0.01;  // gamma
  double reg_binarize = 0.01;
  double reg_sparsity = 0.01;
  // When set, the binarization weight ramps linearly from reg_binarize/epochs
  // in the first epoch up to reg_binarize in the last.
  bool binarize_ramp = false;
  // SGD step multiplier for window centers and half-widths. (T-1)^2 amounts to
  // plain SGD on windows expressed in fractions of the horizon.
  double window_lr_scale = 1.0;

  /// Settings that train reliably on 61-step, 500-trace datasets: sharper
  /// soft operators, many small steps, a ramped binarization penalty and
  /// horizon-scaled window steps.
  static TemplateConfig tuned();

  /// Throws std::invalid_argument on non-positive sizes, rates or temperature.
  void validate() const;
};

struct PredicateModule {
  std::vector<double> coeffs;  // length d, standardized units
  double offset = 0.0;

  bool operator==(const PredicateModule&) const = default;
};

struct TemporalModule {
  double center = 0.0;
  double half_width = 0.0;
  double p_always = 0.5;  // 1 -> Always, 0 -> Eventually

  bool operator==(const TemporalModule&) const = default;
};

/// Per-channel affine map z = (x - shift) / scale applied before the predicates.
struct InputScaling {
  std::vector<double> shift;
  std::vector<double> scale;

  static InputScaling identity(std::size_t channels);
  static InputScaling from_dataset(const LabeledDataset& data);

  bool operator==(const InputScaling&) const = default;
};

struct LearnerParams {
  std::vector<PredicateModule> predicates;
  std::vector<TemporalModule> temporal;
  std::vector<double> p_select;  // output Boolean branch selection
  double p_and = 0.5;            // 1 -> And, 0 -> Or
  InputScaling scaling;
  int trace_length = 0;
  double mask_sharpness = 2.0;

  std::size_t channels() const noexcept { return scaling.shift.size(); }
  std::size_t branches() const noexcept { return temporal.size(); }
  std::size_t probability_count() const noexcept { return 2 * temporal.size() + 1; }

  // Trainable parameters flattened as: per predicate [a_1..a_d, b], per
  // temporal module [center, half_width, p_always], then p_select, then p_and.
  std::vector<double> pack() const;
  void unpack(std::span<const double> flat);
  std::size_t parameter_count() const noexcept;

  /// Clamps probabilities to [0,1] and the window to 0 <= c-w, c+w <= T-1.
  void project();

  bool operator==(const LearnerParams&) const = default;
};

/// Deterministic in (config, seed). Predicate weights ~ N(0, 1/d) and offsets
/// ~ N(0, 0.5^2) in standardized units; windows cover a random sub-window;
/// every probability starts at 0.5. Scaling is the identity.
LearnerParams build_template(const TemplateConfig& config, std::uint64_t seed);

/// Smooth surrogate of rho(X, phi, 0). When `grad` is non-empty it must have
/// parameter_count() entries and receives d(value)/d(param) in pack() order.
double relaxed_robustness(const LearnerParams& params, const Trace& trace, double temperature,
                          std::span<double> grad = {});

/// Mean shifted hinge loss over the batch plus the binarization and
/// sparsity regularizers. Gradient as for relaxed_robustness.
double training_loss(const LearnerParams& params, const LabeledDataset& batch, const TemplateConfig& config,
                     std::span<double> grad = {});

/// Discrete formula read off the parameters (see harden_params).
Formula harden(const LearnerParams& params);

/// Parameters with probabilities rounded to {0,1} and windows snapped to the
/// integer bounds used by harden(). Unselected branches keep their values.
LearnerParams harden_params(const LearnerParams& params);

/// Minibatch SGD from build_template(config, seed) on the standardized data,
/// then harden(). Throws std::invalid_argument if the dataset has one class.
Formula train_formula(const LabeledDataset& data, const TemplateConfig& config, std::uint64_t seed);

/// Stable 64-bit mix of (run_seed, index) used to seed ensemble members.
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) noexcept;

}  // namespace confstl::learn
