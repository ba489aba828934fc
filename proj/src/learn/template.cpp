#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "confstl/learn.hpp"

namespace confstl::learn {

void TemplateConfig::validate() const {
  if (num_predicates <= 0 || num_temporal <= 0) throw std::invalid_argument("template needs modules");
  if (num_predicates != num_temporal) {
    throw std::invalid_argument("each temporal module consumes one predicate: num_predicates must equal num_temporal");
  }
  if (trace_length < 1 || channels < 1) throw std::invalid_argument("template needs positive trace shape");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(mask_sharpness > 0.0)) throw std::invalid_argument("mask sharpness must be positive");
  if (!(learning_rate > 0.0) || batch_size < 1 || epochs < 1) throw std::invalid_argument("invalid optimizer settings");
  if (!(margin > 0.0) || !(margin_weight > 0.0)) throw std::invalid_argument("margin and margin weight must be positive");
  if (reg_binarize < 0.0 || reg_sparsity < 0.0) throw std::invalid_argument("regularizer weights must be >= 0");
  if (!(window_lr_scale > 0.0)) throw std::invalid_argument("window_lr_scale must be positive");
}

TemplateConfig TemplateConfig::tuned() {
  TemplateConfig c;
  c.temperature = 20.0;
  c.batch_size = 16;
  c.epochs = 30;
  c.reg_binarize = 3.0;
  c.reg_sparsity = 2.0;
  c.binarize_ramp = true;
  c.window_lr_scale = 10000.0;
  return c;
}

InputScaling InputScaling::identity(std::size_t channels) {
  return InputScaling{std::vector<double>(channels, 0.0), std::vector<double>(channels, 1.0)};
}

InputScaling InputScaling::from_dataset(const LabeledDataset& data) {
  const std::size_t d = data.channels();
  InputScaling s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  for (std::size_t c = 0; c < d; ++c) {
    double sum = 0.0;
    double sq = 0.0;
    std::size_t n = 0;
    for (const auto& item : data) {
      for (double v : item.trace.channel(c)) {
        sum += v;
        sq += v * v;
        ++n;
      }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
    s.shift[c] = mean;
    s.scale[c] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return s;
}

std::size_t LearnerParams::parameter_count() const noexcept {
  return predicates.size() * (channels() + 1) + 3 * temporal.size() + p_select.size() + 1;
}

std::vector<double> LearnerParams::pack() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& p : predicates) {
    flat.insert(flat.end(), p.coeffs.begin(), p.coeffs.end());
    flat.push_back(p.offset);
  }
  for (const auto& t : temporal) {
    flat.push_back(t.center);
    flat.push_back(t.half_width);
    flat.push_back(t.p_always);
  }
  flat.insert(flat.end(), p_select.begin(), p_select.end());
  flat.push_back(p_and);
  return flat;
}

void LearnerParams::unpack(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("parameter vector has wrong length");
  std::size_t i = 0;
  for (auto& p : predicates) {
    for (double& a : p.coeffs) a = flat[i++];
    p.offset = flat[i++];
  }
  for (auto& t : temporal) {
    t.center = flat[i++];
    t.half_width = flat[i++];
    t.p_always = flat[i++];
  }
  for (double& p : p_select) p = flat[i++];
  p_and = flat[i++];
}

void LearnerParams::project() {
  const double last = static_cast<double>(trace_length - 1);
  for (auto& t : temporal) {
    t.p_always = std::clamp(t.p_always, 0.0, 1.0);
    t.half_width = std::clamp(t.half_width, 0.0, last / 2.0);
    t.center = std::clamp(t.center, t.half_width, last - t.half_width);
  }
  for (double& p : p_select) p = std::clamp(p, 0.0, 1.0);
  p_and = std::clamp(p_and, 0.0, 1.0);
}

LearnerParams build_template(const TemplateConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(derive_seed(seed, 0));
  const auto d = static_cast<std::size_t>(config.channels);
  const auto k = static_cast<std::size_t>(config.num_temporal);
  const double last = static_cast<double>(config.trace_length - 1);

  LearnerParams p;
  p.trace_length = config.trace_length;
  p.mask_sharpness = config.mask_sharpness;
  p.scaling = InputScaling::identity(d);

  std::normal_distribution<double> weight(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  std::normal_distribution<double> offset(0.0, 0.5);
  std::uniform_real_distribution<double> when(0.0, last);

  p.predicates.resize(k);
  for (auto& pred : p.predicates) {
    pred.coeffs.resize(d);
    for (double& a : pred.coeffs) a = weight(rng);
    pred.offset = offset(rng);
  }
  p.temporal.resize(k);
  for (auto& t : p.temporal) {
    const double u = when(rng);
    const double v = when(rng);
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    t.center = 0.5 * (lo + hi);
    t.half_width = 0.5 * (hi - lo);
    t.p_always = 0.5;
  }
  p.p_select.assign(k, 0.5);
  p.p_and = 0.5;
  return p;
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over a golden-ratio stride
  std::uint64_t z = run_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace confstl::learn
