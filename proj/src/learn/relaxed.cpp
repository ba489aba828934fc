#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "confstl/kernels.hpp"
#include "confstl/robustness.hpp"
#include "detail.hpp"

namespace confstl::learn {
namespace {

constexpr double kMaxExponent = 700.0;

// Weighted soft maximum (or minimum when is_min) of v. Writes d(value)/dv into
// dv and d(value)/dw into dw. Entries with w == 0 do not affect the value.
// With `normalized` the weights are divided by their sum first.
double soft_extreme(const double* v, const double* w, std::size_t n, double tau, bool is_min, bool normalized,
                    double* dv, double* dw) {
  const double s = is_min ? -1.0 : 1.0;
  double wsum = 0.0;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    wsum += w[i];
    if (w[i] > 0.0) m = std::max(m, s * v[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dw[i] = std::exp(std::min(tau * (s * v[i] - m), kMaxExponent));
    total += w[i] * dw[i];
  }
  const double norm = normalized ? wsum : 1.0;
  const double value = s * (m + std::log(total / norm) / tau);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = dw[i] / total;
    dv[i] = w[i] * e;
    dw[i] = s * (normalized ? e - 1.0 / wsum : e) / tau;
  }
  return value;
}

class Relaxed {
 public:
  Relaxed(const LearnerParams& p, double tau)
      : p_(p), tau_(tau), k_(p.branches()), d_(p.channels()), t_(static_cast<std::size_t>(p.trace_length)) {
    if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (p.predicates.size() != k_ || p.p_select.size() != k_ || k_ == 0) {
      throw std::invalid_argument("template needs one predicate and one selection weight per temporal module");
    }
    const double sharp = p.mask_sharpness;
    mask_.resize(k_ * t_);
    mask_dlo_.resize(k_ * t_);
    mask_dhi_.resize(k_ * t_);
    for (std::size_t k = 0; k < k_; ++k) {
      const double lo = p.temporal[k].center - p.temporal[k].half_width;
      const double hi = p.temporal[k].center + p.temporal[k].half_width;
      for (std::size_t t = 0; t < t_; ++t) {
        const double x1 = sharp * (static_cast<double>(t) - lo + 0.5);
        const double x2 = sharp * (hi + 0.5 - static_cast<double>(t));
        const double s1 = sigmoid(x1);
        const double s2 = sigmoid(x2);
        const std::size_t i = k * t_ + t;
        mask_[i] = s1 * s2;
        mask_dlo_[i] = -sharp * s1 * sigmoid(-x1) * s2;
        mask_dhi_[i] = sharp * s1 * s2 * sigmoid(-x2);
      }
    }
    coeffs_.resize(k_ * d_);
    offsets_.resize(k_);
    for (std::size_t k = 0; k < k_; ++k) {
      double b = p.predicates[k].offset;
      for (std::size_t c = 0; c < d_; ++c) {
        const double a = p.predicates[k].coeffs[c] / p.scaling.scale[c];
        coeffs_[k * d_ + c] = a;
        b += a * p.scaling.shift[c];
      }
      offsets_[k] = b;
    }
    // Hardening keeps the first branch when nothing is selected; mirror that.
    select_ = p.p_select;
    if (std::all_of(select_.begin(), select_.end(), [](double w) { return w <= 0.0; })) select_.front() = 1.0;

    r_.resize(k_ * t_);
    alpha_a_.resize(k_ * t_);
    alpha_e_.resize(k_ * t_);
    dw_a_.resize(k_ * t_);
    dw_e_.resize(k_ * t_);
    a_.resize(k_);
    e_.resize(k_);
    u_.resize(k_);
    alpha_and_.resize(k_);
    alpha_or_.resize(k_);
    dw_and_.resize(k_);
    dw_or_.resize(k_);
    dmask_.assign(k_ * t_, 0.0);
  }

  double forward(const Trace& trace) {
    if (trace.steps() != t_ || trace.channels() != d_) {
      throw std::invalid_argument("trace shape does not match the template");
    }
    const auto& kern = kernels::active();
    for (std::size_t k = 0; k < k_; ++k) {
      double* r = r_.data() + k * t_;
      kern.affine(trace.data(), t_, d_, coeffs_.data() + k * d_, offsets_[k], r, t_);
      const double* m = mask_.data() + k * t_;
      a_[k] = soft_extreme(r, m, t_, tau_, true, true, alpha_a_.data() + k * t_, dw_a_.data() + k * t_);
      e_[k] = soft_extreme(r, m, t_, tau_, false, true, alpha_e_.data() + k * t_, dw_e_.data() + k * t_);
      const double q = p_.temporal[k].p_always;
      u_[k] = q * a_[k] + (1.0 - q) * e_[k];
    }
    and_ = soft_extreme(u_.data(), select_.data(), k_, tau_, true, false, alpha_and_.data(), dw_and_.data());
    or_ = soft_extreme(u_.data(), select_.data(), k_, tau_, false, false, alpha_or_.data(), dw_or_.data());
    return p_.p_and * and_ + (1.0 - p_.p_and) * or_;
  }

  // Adds upstream * d(rho)/d(params) for the trace of the last forward() call.
  // Window gradients are deferred to finish().
  void backward(const Trace& trace, double upstream, std::span<double> grad) {
    const double pi = p_.p_and;
    const std::size_t temporal_base = k_ * (d_ + 1);
    const std::size_t select_base = temporal_base + 3 * k_;
    grad[select_base + k_] += upstream * (and_ - or_);
    for (std::size_t k = 0; k < k_; ++k) {
      const double du = upstream * (pi * alpha_and_[k] + (1.0 - pi) * alpha_or_[k]);
      grad[select_base + k] += upstream * (pi * dw_and_[k] + (1.0 - pi) * dw_or_[k]);
      const double q = p_.temporal[k].p_always;
      grad[temporal_base + 3 * k + 2] += du * (a_[k] - e_[k]);
      const double da = du * q;
      const double de = du * (1.0 - q);
      const std::size_t pred_base = k * (d_ + 1);
      double db = 0.0;
      for (std::size_t t = 0; t < t_; ++t) {
        const std::size_t i = k * t_ + t;
        const double dr = da * alpha_a_[i] + de * alpha_e_[i];
        dmask_[i] += da * dw_a_[i] + de * dw_e_[i];
        db -= dr;
        for (std::size_t c = 0; c < d_; ++c) {
          const double z = (trace.at(c, t) - p_.scaling.shift[c]) / p_.scaling.scale[c];
          grad[pred_base + c] += dr * z;
        }
      }
      grad[pred_base + d_] += db;
    }
  }

  void finish(std::span<double> grad) {
    const std::size_t temporal_base = k_ * (d_ + 1);
    for (std::size_t k = 0; k < k_; ++k) {
      double dlo = 0.0;
      double dhi = 0.0;
      for (std::size_t t = 0; t < t_; ++t) {
        const std::size_t i = k * t_ + t;
        dlo += dmask_[i] * mask_dlo_[i];
        dhi += dmask_[i] * mask_dhi_[i];
      }
      grad[temporal_base + 3 * k] += dlo + dhi;
      grad[temporal_base + 3 * k + 1] += dhi - dlo;
    }
    std::fill(dmask_.begin(), dmask_.end(), 0.0);
  }

 private:
  const LearnerParams& p_;
  double tau_;
  std::size_t k_, d_, t_;
  std::vector<double> mask_, mask_dlo_, mask_dhi_;
  std::vector<double> coeffs_, offsets_;
  std::vector<double> select_;
  std::vector<double> r_, alpha_a_, alpha_e_, dw_a_, dw_e_;
  std::vector<double> a_, e_, u_, alpha_and_, alpha_or_, dw_and_, dw_or_;
  double and_ = 0.0, or_ = 0.0;
  std::vector<double> dmask_;
};

void check_grad(const LearnerParams& params, std::span<double> grad) {
  if (!grad.empty() && grad.size() != params.parameter_count()) {
    throw std::invalid_argument("gradient buffer has wrong length");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
}

}  // namespace

double relaxed_robustness(const LearnerParams& params, const Trace& trace, double temperature,
                          std::span<double> grad) {
  check_grad(params, grad);
  Relaxed model(params, temperature);
  const double rho = model.forward(trace);
  if (!grad.empty()) {
    model.backward(trace, 1.0, grad);
    model.finish(grad);
  }
  return rho;
}

namespace detail {

double batch_loss(const LearnerParams& params, const LabeledDataset& data, std::span<const std::size_t> indices,
                  const TemplateConfig& config, std::span<double> grad) {
  if (indices.empty()) throw std::invalid_argument("empty batch");
  check_grad(params, grad);
  Relaxed model(params, config.temperature);
  const double n = static_cast<double>(indices.size());
  double hinge = 0.0;
  for (std::size_t idx : indices) {
    const auto& item = data[idx];
    const double y = to_int(item.label);
    const double rho = model.forward(item.trace);
    const double slack = config.margin - y * rho;
    if (slack > 0.0) {
      hinge += slack;
      if (!grad.empty()) model.backward(item.trace, -y / n, grad);
    }
  }
  if (!grad.empty()) model.finish(grad);
  double loss = hinge / n - config.margin_weight * config.margin;

  const std::size_t k = params.branches();
  const std::size_t temporal_base = k * (params.channels() + 1);
  const std::size_t select_base = temporal_base + 3 * k;
  auto binarize = [&](double p, std::size_t slot) {
    loss += config.reg_binarize * p * (1.0 - p);
    if (!grad.empty()) grad[slot] += config.reg_binarize * (1.0 - 2.0 * p);
  };
  for (std::size_t i = 0; i < k; ++i) {
    binarize(params.temporal[i].p_always, temporal_base + 3 * i + 2);
    binarize(params.p_select[i], select_base + i);
    loss += config.reg_sparsity * params.p_select[i];
    if (!grad.empty()) grad[select_base + i] += config.reg_sparsity;
  }
  binarize(params.p_and, select_base + k);
  return loss;
}

}  // namespace detail

double training_loss(const LearnerParams& params, const LabeledDataset& batch, const TemplateConfig& config,
                     std::span<double> grad) {
  std::vector<std::size_t> all(batch.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return detail::batch_loss(params, batch, all, config, grad);
}

}  // namespace confstl::learn
