#pragma once

// Sequential formula-set generation with complexity/diversity acceptance and
// quality-based stopping.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confstl/formula.hpp"
#include "confstl/learn.hpp"
#include "confstl/trace.hpp"

namespace confstl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thresholds (lambda1 complexity, lambda2 diversity, lambda3 stopping).
struct Hyper {
  double lambda1 = kInf;
  double lambda2 = 0.0;
  double lambda3 = kInf;

  /// (inf, 0, inf): accept everything, never stop early.
  static Hyper fallback() { return {}; }

  /// Throws std::invalid_argument unless lambda1 > 0, lambda2 >= 0, lambda3 >= 0.
  void validate() const;

  auto operator<=>(const Hyper&) const = default;
};

std::string to_string(const Hyper& h);

enum class RejectionReason { None, Complexity, Diversity };

std::string_view to_string(RejectionReason r);

struct Decision {
  bool accepted = false;
  RejectionReason reason = RejectionReason::None;
};

struct AcceptedFormula {
  Formula formula;
  double complexity = 0.0;
  double quality = 0.0;
  std::optional<double> accuracy;  // on validation data, when known
  std::uint64_t seed = 0;
  int iteration = 0;
};

struct GenerationRecord {
  int iteration = 0;
  std::string candidate;
  bool accepted = false;
  RejectionReason reason = RejectionReason::None;
  double complexity = 0.0;
  std::optional<double> min_distance;  // to the members present before this step
  double set_quality = 0.0;            // after this step
};

struct FormulaSet {
  std::vector<AcceptedFormula> accepted;
  std::vector<GenerationRecord> log;

  std::size_t size() const noexcept { return accepted.size(); }
  bool empty() const noexcept { return accepted.empty(); }
};

/// Lazily trained candidates for one training dataset: candidate l (1-based)
/// is train_formula(train, config, derive_seed(run_seed, l)). Each candidate is
/// trained once and cached together with its robustness on the training data
/// and, if a validation set is attached, its validation accuracy. Sets for any
/// number of thresholds can then be replayed without retraining.
class CandidateStream {
 public:
  struct Candidate {
    Formula formula;  // canonical
    std::string text;
    std::uint64_t seed = 0;
    double complexity = 0.0;
    double quality = 0.0;
    std::vector<double> robustness;  // on the training data
    std::optional<double> valid_accuracy;
  };

  /// The datasets must outlive the stream.
  CandidateStream(const LabeledDataset& train, const learn::TemplateConfig& config, std::uint64_t run_seed,
                  const LabeledDataset* valid = nullptr);

  const Candidate& at(int l);
  int trained() const noexcept { return static_cast<int>(cache_.size()); }
  const LabeledDataset& train() const noexcept { return *train_; }
  int capacity() const noexcept { return config_.num_temporal; }

 private:
  const LabeledDataset* train_;
  const LabeledDataset* valid_;
  learn::TemplateConfig config_;
  std::uint64_t run_seed_;
  std::vector<Candidate> cache_;
};

/// H(candidate) < lambda1, then D(candidate, phi) > lambda2 for every phi in
/// the set. Complexity is checked first.
Decision accept_candidate(const Formula& candidate, const FormulaSet& current, const LabeledDataset& data,
                          double lambda1, double lambda2, int capacity = 6);

/// Mean quality of the accepted formulas on data; 0 for an empty set.
double set_quality(const FormulaSet& set, const LabeledDataset& data);

/// F > lambda3 or iteration == l_max.
bool should_stop(double set_quality, double lambda3, int iteration, int l_max);
bool should_stop(const FormulaSet& set, const LabeledDataset& data, double lambda3, int iteration, int l_max);

/// Replays the generation loop over the stream's candidates.
FormulaSet generate_set(CandidateStream& stream, const Hyper& lambda, int l_max);

/// Trains candidates on demand from (data, config, run_seed).
FormulaSet generate_set(const LabeledDataset& data, const Hyper& lambda, const learn::TemplateConfig& config,
                        int l_max, std::uint64_t run_seed);

/// {"formulas": [{formula, complexity, quality, accuracy, seed, iteration}, ...]}
/// with accuracy null when unknown.
void write_formula_set_json(std::ostream& out, const FormulaSet& set, const ChannelNames& channels);
std::vector<AcceptedFormula> read_formula_set_json(std::istream& in, const ChannelNames& channels);

/// Columns iteration,accepted,reason,H,min_D,F; min_D empty for the first member.
void write_generation_log_csv(std::ostream& out, const FormulaSet& set);

}  // namespace confstl
