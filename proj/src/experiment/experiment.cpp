#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "confstl/experiment.hpp"
#include "confstl/numfmt.hpp"

namespace confstl::experiment {
namespace {

std::mt19937_64 seed_rng(std::uint64_t sim_seed, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(sim_seed), static_cast<std::uint32_t>(sim_seed >> 32),
                    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

std::string pair_file(std::size_t k) {
  std::string s = std::to_string(k);
  return "pair_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s + ".json";
}

struct Cell {
  MetricsRow row;
  std::optional<CalibrationResult> calibration;
  CalibrationOptions options;
  std::vector<FormulaSet> sets;
};

Cell run_cell(const ExperimentConfig& config, Variant method, double epsilon, std::uint64_t seed,
              const std::vector<Hyper>& grid, StreamEvaluator& cal, StreamEvaluator& test, const SeedData& data) {
  Cell cell;
  cell.row.method = method;
  cell.row.epsilon = epsilon;
  cell.row.seed = seed;
  if (method == Variant::Stll) {
    for (std::size_t k = 0; k < data.test.size(); ++k) {
      cell.sets.push_back(generate_set(test.stream(k), Hyper::fallback(), 1));
    }
  } else {
    cell.options.epsilon = epsilon;
    cell.options.delta = config.delta;
    cell.options.split_fraction = config.split_fraction;
    cell.options.method = method == Variant::Bonferroni ? Method::Bonferroni : Method::Pareto;
    const auto candidates = restricted_grid(method, grid);
    cell.calibration = calibrate_lambda(candidates, cal, cell.options);
    cell.row.lambda_star = cell.calibration->lambda_star;
    cell.row.fallback_used = cell.calibration->fallback_used;
    for (std::size_t k = 0; k < data.test.size(); ++k) cell.sets.push_back(test.generate(cell.row.lambda_star, k));
  }
  cell.row.metrics = compute_metrics(cell.sets, data.test, config.phi, config.learner.num_temporal);
  return cell;
}

void write_cell(const std::filesystem::path& root, const Cell& cell, const SeedData& data) {
  const auto dir = root / "cells" / std::string(to_string(cell.row.method)) /
                   ("eps_" + format_double(cell.row.epsilon)) / ("seed_" + std::to_string(cell.row.seed));
  if (cell.calibration) {
    write_file_atomic(dir / "calibration_report.csv",
                      [&](std::ostream& out) { write_calibration_report_csv(out, *cell.calibration); });
    write_file_atomic(dir / "calibration_summary.json",
                      [&](std::ostream& out) { write_calibration_summary_json(out, *cell.calibration, cell.options); });
  }
  for (std::size_t k = 0; k < cell.sets.size(); ++k) {
    write_file_atomic(dir / "sets" / pair_file(k), [&](std::ostream& out) {
      write_formula_set_json(out, cell.sets[k], data.test[k].train.channel_names());
    });
  }
}

}  // namespace

SeedData make_seed_data(const ExperimentConfig& config, std::uint64_t seed) {
  auto rng = seed_rng(config.sim.rng_seed, seed);
  SeedData data;
  for (std::size_t k = 0; k < config.n_cal_pairs; ++k) {
    data.calibration.push_back(tracegen::sample_dataset_pair(config.n_train, config.n_valid, config.sim, rng));
  }
  for (std::size_t k = 0; k < config.n_test_pairs; ++k) {
    data.test.push_back(tracegen::sample_dataset_pair(config.n_train, config.n_valid, config.sim, rng));
  }
  return data;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config, const Progress& progress) {
  config.validate();
  const auto grid = config.grid();
  const std::filesystem::path root = config.out_dir;
  const bool write = !config.out_dir.empty();

  // per_seed[s][m * |eps| + e]
  std::vector<std::vector<MetricsRow>> per_seed(config.seeds.size());
  std::mutex mu;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t s = next++; s < config.seeds.size(); s = next++) {
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const std::uint64_t seed = config.seeds[s];
      Variant method = config.methods.front();
      double epsilon = config.epsilons.front();
      try {
        const SeedData data = make_seed_data(config, seed);
        StreamEvaluator cal(data.calibration, config.learner, config.l_max, seed, config.phi);
        StreamEvaluator test(data.test, config.learner, config.l_max, seed, config.phi);
        for (Variant m : config.methods) {
          for (double e : config.epsilons) {
            method = m;
            epsilon = e;
            Cell cell = run_cell(config, m, e, seed, grid, cal, test, data);
            if (write) write_cell(root, cell, data);
            per_seed[s].push_back(cell.row);
            if (progress) {
              std::lock_guard lock(mu);
              progress(cell.row);
            }
          }
        }
      } catch (const std::exception& ex) {
        std::lock_guard lock(mu);
        if (!failure) {
          failure = std::make_exception_ptr(std::runtime_error("method " + std::string(to_string(method)) +
                                                               ", epsilon " + format_double(epsilon) + ", seed " +
                                                               std::to_string(seed) + ": " + ex.what()));
        }
        return;
      }
    }
  };

  std::size_t threads = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.seeds.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MetricsRow> rows;
  const std::size_t cells = config.methods.size() * config.epsilons.size();
  for (std::size_t c = 0; c < cells; ++c) {
    for (const auto& seed_rows : per_seed) rows.push_back(seed_rows[c]);
  }

  if (write) {
    write_file_atomic(root / "config.cfg", [&](std::ostream& out) { write_config(out, config); });
    write_file_atomic(root / "metrics.csv", [&](std::ostream& out) { write_metrics_csv(out, rows); });
    const auto summary = summarize(rows);
    write_file_atomic(root / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, summary); });
    write_plots(root / "plots", summary);
  }
  return rows;
}

}  // namespace confstl::experiment
