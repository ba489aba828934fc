#include "confstl/setgen.hpp"

#include <algorithm>
#include <stdexcept>

#include "confstl/numfmt.hpp"
#include "confstl/robustness.hpp"

namespace confstl {

void Hyper::validate() const {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be positive");
  if (!(lambda2 >= 0.0)) throw std::invalid_argument("lambda2 must be >= 0");
  if (!(lambda3 >= 0.0)) throw std::invalid_argument("lambda3 must be >= 0");
}

std::string to_string(const Hyper& h) {
  return "(" + format_double(h.lambda1) + ", " + format_double(h.lambda2) + ", " + format_double(h.lambda3) + ")";
}

std::string_view to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::None:
      return "none";
    case RejectionReason::Complexity:
      return "complexity";
    case RejectionReason::Diversity:
      return "diversity";
  }
  return "none";
}

CandidateStream::CandidateStream(const LabeledDataset& train, const learn::TemplateConfig& config,
                                 std::uint64_t run_seed, const LabeledDataset* valid)
    : train_(&train), valid_(valid), config_(config), run_seed_(run_seed) {
  config_.validate();
}

const CandidateStream::Candidate& CandidateStream::at(int l) {
  if (l < 1) throw std::invalid_argument("candidate index is 1-based");
  while (static_cast<int>(cache_.size()) < l) {
    const int next = static_cast<int>(cache_.size()) + 1;
    const std::uint64_t seed = learn::derive_seed(run_seed_, static_cast<std::uint64_t>(next));
    const auto& names = train_->channel_names();
    Formula f = canonicalize(learn::train_formula(*train_, config_, seed), names);
    Candidate c{f, format_formula(f, names), seed, complexity(f, config_.num_temporal), 0.0,
                robustness_at_origin(f, *train_), std::nullopt};
    c.quality = quality_from_robustness(c.robustness);
    if (valid_ != nullptr) c.valid_accuracy = accuracy(f, *valid_);
    cache_.push_back(std::move(c));
  }
  return cache_[static_cast<std::size_t>(l - 1)];
}

Decision accept_candidate(const Formula& candidate, const FormulaSet& current, const LabeledDataset& data,
                          double lambda1, double lambda2, int capacity) {
  if (!(complexity(candidate, capacity) < lambda1)) return {false, RejectionReason::Complexity};
  if (current.empty()) return {true, RejectionReason::None};
  const auto r = robustness_at_origin(candidate, data);
  for (const auto& member : current.accepted) {
    const auto rm = robustness_at_origin(member.formula, data);
    if (!(distance_from_robustness(r, rm) > lambda2)) return {false, RejectionReason::Diversity};
  }
  return {true, RejectionReason::None};
}

double set_quality(const FormulaSet& set, const LabeledDataset& data) {
  if (set.empty()) return 0.0;
  double total = 0.0;
  for (const auto& member : set.accepted) total += quality(member.formula, data);
  return total / static_cast<double>(set.size());
}

bool should_stop(double set_quality, double lambda3, int iteration, int l_max) {
  return set_quality > lambda3 || iteration == l_max;
}

bool should_stop(const FormulaSet& set, const LabeledDataset& data, double lambda3, int iteration, int l_max) {
  return should_stop(set_quality(set, data), lambda3, iteration, l_max);
}

FormulaSet generate_set(CandidateStream& stream, const Hyper& lambda, int l_max) {
  if (l_max < 1) throw std::invalid_argument("l_max must be >= 1");
  lambda.validate();
  FormulaSet set;
  std::vector<int> members;  // indices: the cache may reallocate as the stream grows
  double quality_sum = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    const auto& c = stream.at(l);
    GenerationRecord rec;
    rec.iteration = l;
    rec.candidate = c.text;
    rec.complexity = c.complexity;
    if (!(c.complexity < lambda.lambda1)) {
      rec.reason = RejectionReason::Complexity;
    } else {
      for (int m : members) {
        const double d = distance_from_robustness(c.robustness, stream.at(m).robustness);
        rec.min_distance = rec.min_distance ? std::min(*rec.min_distance, d) : d;
      }
      if (rec.min_distance && !(*rec.min_distance > lambda.lambda2)) rec.reason = RejectionReason::Diversity;
    }
    if (rec.reason == RejectionReason::None) {
      rec.accepted = true;
      members.push_back(l);
      quality_sum += c.quality;
      set.accepted.push_back(AcceptedFormula{c.formula, c.complexity, c.quality, c.valid_accuracy, c.seed, l});
    }
    rec.set_quality = set.empty() ? 0.0 : quality_sum / static_cast<double>(set.size());
    set.log.push_back(rec);
    if (should_stop(rec.set_quality, lambda.lambda3, l, l_max)) break;
  }
  return set;
}

FormulaSet generate_set(const LabeledDataset& data, const Hyper& lambda, const learn::TemplateConfig& config,
                        int l_max, std::uint64_t run_seed) {
  if (!data.has_both_labels()) throw std::invalid_argument("training data must contain both labels");
  CandidateStream stream(data, config, run_seed);
  return generate_set(stream, lambda, l_max);
}

}  // namespace confstl
