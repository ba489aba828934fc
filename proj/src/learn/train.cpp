#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "confstl/learn.hpp"
#include "detail.hpp"

namespace confstl::learn {

LearnerParams harden_params(const LearnerParams& params) {
  LearnerParams h = params;
  const double last = static_cast<double>(params.trace_length - 1);
  for (auto& t : h.temporal) {
    const double lo = std::clamp(std::round(t.center - t.half_width), 0.0, last);
    const double hi = std::clamp(std::round(t.center + t.half_width), lo, last);
    t.center = 0.5 * (lo + hi);
    t.half_width = 0.5 * (hi - lo);
    t.p_always = t.p_always >= 0.5 ? 1.0 : 0.0;
  }
  bool any = false;
  for (double& p : h.p_select) {
    any = any || p >= 0.5;
    p = p >= 0.5 ? 1.0 : 0.0;
  }
  if (!any && !h.p_select.empty()) {
    const auto best = std::max_element(params.p_select.begin(), params.p_select.end()) - params.p_select.begin();
    h.p_select[static_cast<std::size_t>(best)] = 1.0;
  }
  h.p_and = h.p_and >= 0.5 ? 1.0 : 0.0;
  return h;
}

Formula harden(const LearnerParams& params) {
  const LearnerParams h = harden_params(params);
  const std::size_t d = h.channels();
  std::vector<Formula> branches;
  for (std::size_t k = 0; k < h.branches(); ++k) {
    if (h.p_select[k] != 1.0) continue;
    const auto& pred = h.predicates[k];
    std::vector<double> coeffs(d);
    double offset = pred.offset;
    for (std::size_t c = 0; c < d; ++c) {
      coeffs[c] = pred.coeffs[c] / h.scaling.scale[c];
      offset += coeffs[c] * h.scaling.shift[c];
    }
    const auto& tm = h.temporal[k];
    const Interval window{static_cast<int>(tm.center - tm.half_width), static_cast<int>(tm.center + tm.half_width)};
    Formula atom = Formula::atom(std::move(coeffs), offset);
    branches.push_back(tm.p_always == 1.0 ? Formula::always(window, std::move(atom))
                                          : Formula::eventually(window, std::move(atom)));
  }
  if (branches.size() == 1) return std::move(branches.front());
  return h.p_and == 1.0 ? Formula::conjunction(std::move(branches)) : Formula::disjunction(std::move(branches));
}

Formula train_formula(const LabeledDataset& data, const TemplateConfig& config, std::uint64_t seed) {
  if (!data.has_both_labels()) throw std::invalid_argument("training data must contain both labels");
  TemplateConfig cfg = config;
  cfg.channels = static_cast<int>(data.channels());
  cfg.trace_length = static_cast<int>(data.steps());
  LearnerParams params = build_template(cfg, seed);
  params.scaling = InputScaling::from_dataset(data);

  std::mt19937_64 rng(derive_seed(seed, 1));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(params.parameter_count());
  std::vector<double> step(params.parameter_count(), cfg.learning_rate);
  const std::size_t window_base = params.predicates.size() * (params.channels() + 1);
  for (std::size_t k = 0; k < params.branches(); ++k) {
    step[window_base + 3 * k] *= cfg.window_lr_scale;
    step[window_base + 3 * k + 1] *= cfg.window_lr_scale;
  }
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (config.binarize_ramp) cfg.reg_binarize = config.reg_binarize * ((epoch + 1.0) / cfg.epochs);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      detail::batch_loss(params, data, std::span(order).subspan(start, len), cfg, grad);
      auto flat = params.pack();
      for (std::size_t i = 0; i < flat.size(); ++i) flat[i] -= step[i] * grad[i];
      params.unpack(flat);
      params.project();
    }
  }
  return harden(params);
}

}  // namespace confstl::learn
