#pragma once

// Threshold calibration: empirical set-miss risk over calibration pairs, exact
// binomial p-values, Pareto ordering with fixed-sequence testing, and the
// Bonferroni baseline.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "confstl/learn.hpp"
#include "confstl/pair.hpp"
#include "confstl/setgen.hpp"

namespace confstl {

/// lambda1 in {0.33, 0.5, 0.67} x lambda2 in {0.50, ..., 0.58} x lambda3 in
/// {0.3, ..., 0.7}, in lexicographic order (75 entries).
std::vector<Hyper> default_grid();

/// Throws std::invalid_argument if empty or if a triple repeats.
void validate_grid(std::span<const Hyper> grid);

/// 1 iff accuracy(formula, valid) > phi (strict).
bool accuracy_indicator(const Formula& formula, const LabeledDataset& valid, double phi);

/// Outcome of running the generator with one threshold triple on one pair.
struct PairOutcome {
  bool miss = false;  // no member exceeds the accuracy threshold
  double set_size = 0.0;
};

/// Source of per-pair outcomes; implementations may cache.
class RiskEvaluator {
 public:
  virtual ~RiskEvaluator() = default;
  virtual std::size_t pair_count() const = 0;
  virtual PairOutcome evaluate(const Hyper& lambda, std::size_t pair) = 0;
};

struct RiskEstimate {
  double risk = 0.0;
  double avg_set_size = 0.0;
  std::size_t failures = 0;
  std::size_t pairs = 0;
};

/// Fraction of the listed pairs that miss, with the mean set size.
RiskEstimate empirical_risk(RiskEvaluator& evaluator, const Hyper& lambda, std::span<const std::size_t> pairs);

/// Pr(Bin(k_total, epsilon) <= k_total * risk_hat). risk_hat * k_total must be
/// within 1e-9 of an integer.
double binomial_pvalue(double risk_hat, int k_total, double epsilon);

/// Pr(Bin(k_total, epsilon) <= failures).
double binomial_cdf(int failures, int k_total, double epsilon);

struct ScoredCandidate {
  double risk = 0.0;
  double size = 0.0;
  Hyper lambda;
  double p_value = 1.0;
};

/// Points not strictly dominated in (risk, size), ordered by p-value, then
/// risk, then lambda.
std::vector<Hyper> pareto_frontier(std::span<const ScoredCandidate> points);

/// Number of leading p-values below delta.
std::size_t fixed_sequence_prefix(std::span<const double> p_values, double delta);

enum class Method { Pareto, Bonferroni };

struct CalibrationOptions {
  double epsilon = 0.2;
  double delta = 0.05;
  Method method = Method::Pareto;
  double split_fraction = 0.5;

  void validate() const;
};

struct CandidateRecord {
  Hyper lambda;
  // Pareto: estimate on the ordering split. Bonferroni: on all pairs.
  RiskEstimate split1;
  double p_split1 = 1.0;
  bool on_frontier = false;
  bool tested = false;
  std::optional<RiskEstimate> split2;
  std::optional<double> p_split2;
  bool rejected = false;  // null hypothesis "risk >= epsilon" rejected
};

struct CalibrationResult {
  Hyper lambda_star = Hyper::fallback();
  std::vector<Hyper> valid_set;  // in test order
  std::vector<CandidateRecord> records;  // grid order
  bool fallback_used = true;
  std::size_t split1_pairs = 0;
  std::size_t split2_pairs = 0;
};

/// Tests the walk over `ordered` on the listed pairs; returns the rejected
/// prefix and fills p-values for every tested hypothesis.
std::vector<Hyper> fixed_sequence_test(std::span<const Hyper> ordered, RiskEvaluator& evaluator,
                                       std::span<const std::size_t> pairs, double epsilon, double delta,
                                       std::vector<std::pair<RiskEstimate, double>>* tested = nullptr);

/// All grid points whose p-value on the listed pairs is below delta / |grid|.
std::vector<Hyper> bonferroni_select(std::span<const Hyper> grid, RiskEvaluator& evaluator,
                                     std::span<const std::size_t> pairs, double epsilon, double delta);

/// Pareto: the first round(split_fraction * K) pairs order the frontier, the
/// rest run the fixed-sequence test. Bonferroni: all pairs, per-test level
/// delta / |grid|. lambda_star minimizes the average set size over the valid
/// set on the testing pairs (ties: lower risk, then lexicographic); an empty
/// valid set gives the fallback (inf, 0, inf).
CalibrationResult calibrate_lambda(std::span<const Hyper> grid, RiskEvaluator& evaluator,
                                   const CalibrationOptions& options);

/// Outcomes from actually generating formula sets: one lazily trained
/// candidate stream per pair, all driven by the same run_seed.
class StreamEvaluator : public RiskEvaluator {
 public:
  /// `pairs` must outlive the evaluator.
  StreamEvaluator(std::span<const CalibrationPair> pairs, const learn::TemplateConfig& config, int l_max,
                  std::uint64_t run_seed, double phi);

  std::size_t pair_count() const override { return streams_.size(); }
  PairOutcome evaluate(const Hyper& lambda, std::size_t pair) override;

  FormulaSet generate(const Hyper& lambda, std::size_t pair);
  CandidateStream& stream(std::size_t pair) { return *streams_.at(pair); }
  double phi() const noexcept { return phi_; }
  int l_max() const noexcept { return l_max_; }

 private:
  std::vector<std::unique_ptr<CandidateStream>> streams_;
  int l_max_;
  double phi_;
};

/// Per-pair miss indicators with known true risks: pair k misses under lambda
/// iff u_k < true_risk(lambda), with u_k ~ U(0,1) shared across candidates.
class SyntheticEvaluator : public RiskEvaluator {
 public:
  SyntheticEvaluator(std::vector<Hyper> grid, std::vector<double> true_risk, std::vector<double> set_size,
                     std::size_t pairs, std::mt19937_64& rng);

  std::size_t pair_count() const override { return uniforms_.size(); }
  PairOutcome evaluate(const Hyper& lambda, std::size_t pair) override;

 private:
  std::vector<Hyper> grid_;
  std::vector<double> risk_;
  std::vector<double> size_;
  std::vector<double> uniforms_;
};

/// One row per grid point: lambda1,lambda2,lambda3,risk_split1,size_split1,
/// p_split1,on_frontier,tested,p_split2,rejected.
void write_calibration_report_csv(std::ostream& out, const CalibrationResult& result);

/// JSON record with lambda_star, fallback flag, valid set and split sizes.
void write_calibration_summary_json(std::ostream& out, const CalibrationResult& result,
                                    const CalibrationOptions& options);

}  // namespace confstl
