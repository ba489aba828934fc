#pragma once

// Benchmark matrix: single-formula learning, calibrated set generation and its
// ablations, evaluated over risk tolerances and seeds.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confstl/calibrate.hpp"
#include "confstl/learn.hpp"
#include "confstl/pair.hpp"
#include "confstl/robustness.hpp"
#include "confstl/setgen.hpp"
#include "confstl/tracegen.hpp"

namespace confstl::experiment {

enum class Variant { Stll, Cstll, StoppingOnly, ComplexityStopping, DiversityStopping, Bonferroni };

inline constexpr std::array<Variant, 6> kAllVariants{Variant::Stll,
                                                     Variant::Cstll,
                                                     Variant::StoppingOnly,
                                                     Variant::ComplexityStopping,
                                                     Variant::DiversityStopping,
                                                     Variant::Bonferroni};

std::string_view to_string(Variant v);

/// Throws std::invalid_argument for an unknown name.
Variant parse_variant(std::string_view name);

/// Grid points a variant calibrates over. Unused thresholds are pinned
/// (lambda1 = inf, lambda2 = 0) and duplicates dropped, first occurrence first.
std::vector<Hyper> restricted_grid(Variant v, std::span<const Hyper> grid);

struct ExperimentConfig {
  std::vector<Variant> methods{kAllVariants.begin(), kAllVariants.end()};
  std::vector<double> epsilons{0.1, 0.2, 0.3};
  double delta = 0.05;
  double phi = 0.8;
  double split_fraction = 0.5;
  std::vector<double> grid_lambda1{0.33, 0.5, 0.67};
  std::vector<double> grid_lambda2{0.50, 0.52, 0.54, 0.56, 0.58};
  std::vector<double> grid_lambda3{0.3, 0.4, 0.5, 0.6, 0.7};
  std::size_t n_train = 5000;
  std::size_t n_valid = 1000;
  std::size_t n_cal_pairs = 100;
  std::size_t n_test_pairs = 100;
  int l_max = 10;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  tracegen::SimParams sim;
  learn::TemplateConfig learner = learn::TemplateConfig::tuned();
  std::string out_dir = "results";
  int threads = 0;  // 0: hardware concurrency

  /// 500/200 traces, 40 calibration pairs, 20 test pairs.
  void apply_desk_scale();

  std::vector<Hyper> grid() const;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
};

/// Flat "key = value" lines; '#' starts a comment. Lists are comma separated.
/// Simulator and learner fields use the prefixes "sim." and "learner.".
/// Keys not present keep the value from `base`. Unknown keys throw.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
void write_config(std::ostream& out, const ExperimentConfig& config);

struct SetMetrics {
  double avg_risk = 0.0;
  double avg_set_size = 0.0;
  std::optional<double> avg_complexity;  // none when every set is empty
  std::optional<double> avg_diversity;   // none when no set has two members
};

/// One set per pair. Risk uses the pair's validation data, diversity its
/// training data. Throws std::invalid_argument on an empty or mismatched list.
SetMetrics compute_metrics(std::span<const FormulaSet> sets, std::span<const CalibrationPair> pairs, double phi,
                           int capacity = kDefaultTemporalCapacity);

struct MetricsRow {
  Variant method = Variant::Cstll;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  SetMetrics metrics;
  Hyper lambda_star;
  bool fallback_used = false;
};

/// Calibration and test pairs for one seed; a pure function of (config, seed).
struct SeedData {
  std::vector<CalibrationPair> calibration;
  std::vector<CalibrationPair> test;
};
SeedData make_seed_data(const ExperimentConfig& config, std::uint64_t seed);

using Progress = std::function<void(const MetricsRow&)>;

/// Runs every (method, epsilon) cell for every seed. Candidate streams are
/// shared within a seed, so all methods and tolerances see the same
/// candidates. Rows are ordered by method, epsilon, then seed. With a
/// non-empty out_dir writes metrics.csv, summary.csv, plots and per-cell
/// calibration reports and formula sets.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config, const Progress& progress = {});

/// Columns method,epsilon,seed,avg_risk,avg_set_size,avg_complexity,
/// avg_diversity,lambda1,lambda2,lambda3,fallback; undefined metrics as "n/a".
void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

struct Stat {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t n = 0;  // rows with a defined value
};

struct SummaryRow {
  Variant method = Variant::Cstll;
  double epsilon = 0.0;
  Stat risk, set_size, complexity, diversity;
};

/// Seed averages with standard errors per (method, epsilon).
std::vector<SummaryRow> summarize(std::span<const MetricsRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

/// risk.svg, set_size.svg, complexity.svg and diversity.svg: one line per
/// method against epsilon with standard-error bars; the risk panel also draws
/// y = epsilon.
void write_plots(const std::filesystem::path& dir, std::span<const SummaryRow> rows);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace confstl::experiment
