#include <algorithm>
#include <stdexcept>

#include "confstl/calibrate.hpp"

namespace confstl {

StreamEvaluator::StreamEvaluator(std::span<const CalibrationPair> pairs, const learn::TemplateConfig& config,
                                 int l_max, std::uint64_t run_seed, double phi)
    : l_max_(l_max), phi_(phi) {
  if (l_max < 1) throw std::invalid_argument("l_max must be >= 1");
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("accuracy threshold must lie in [0,1]");
  for (const auto& p : pairs) {
    streams_.push_back(std::make_unique<CandidateStream>(p.train, config, run_seed, &p.valid));
  }
}

FormulaSet StreamEvaluator::generate(const Hyper& lambda, std::size_t pair) {
  return generate_set(*streams_.at(pair), lambda, l_max_);
}

PairOutcome StreamEvaluator::evaluate(const Hyper& lambda, std::size_t pair) {
  const FormulaSet set = generate(lambda, pair);
  const bool hit = std::any_of(set.accepted.begin(), set.accepted.end(),
                               [&](const AcceptedFormula& m) { return m.accuracy.value_or(0.0) > phi_; });
  return {!hit, static_cast<double>(set.size())};
}

SyntheticEvaluator::SyntheticEvaluator(std::vector<Hyper> grid, std::vector<double> true_risk,
                                       std::vector<double> set_size, std::size_t pairs, std::mt19937_64& rng)
    : grid_(std::move(grid)), risk_(std::move(true_risk)), size_(std::move(set_size)), uniforms_(pairs) {
  if (grid_.size() != risk_.size() || grid_.size() != size_.size()) {
    throw std::invalid_argument("synthetic evaluator needs one risk and size per candidate");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& u : uniforms_) u = unit(rng);
}

PairOutcome SyntheticEvaluator::evaluate(const Hyper& lambda, std::size_t pair) {
  const auto it = std::find(grid_.begin(), grid_.end(), lambda);
  if (it == grid_.end()) throw std::invalid_argument("synthetic evaluator: unknown candidate " + to_string(lambda));
  const auto i = static_cast<std::size_t>(it - grid_.begin());
  return {uniforms_.at(pair) < risk_[i], size_[i]};
}

}  // namespace confstl
