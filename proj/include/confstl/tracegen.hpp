#pragma once

// Synthetic latency/backlog KPI traces standing in for a network simulator,
// labeled by the rule "latency stays below T1 throughout and backlog is below
// T2 over the last five steps".

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include "confstl/pair.hpp"
#include "confstl/trace.hpp"

namespace confstl::tracegen {

struct Task {
  double t1 = 0.0;  // latency threshold, ms
  double t2 = 0.0;  // backlog threshold, kilobytes
  int id = 0;
};

const std::array<Task, 5>& paper_tasks();

/// Uniform over paper_tasks().
Task sample_task(std::mt19937_64& rng);

struct SimParams {
  int steps = 61;
  double base_latency = 60.0;
  double latency_noise_scale = 5.0;
  double ar_coefficient = 0.8;
  double burst_rate = 0.02;       // probability that a burst starts at a step
  double burst_magnitude = 35.0;  // mean of the exponential burst latency
  int burst_duration = 6;
  double arrival_rate = 4.0;      // mean arrivals per step, kilobytes
  double arrival_noise = 4.0;     // arrivals = max(0, rate + noise * (Exp(1) - 1))
  double burst_arrivals = 3.0;    // extra arrivals per step while a burst is active
  double service_rate = 4.4;
  std::uint64_t rng_seed = 1;

  /// Throws std::invalid_argument on negative rates, steps < 2 or ar outside [0,1).
  void validate() const;
};

/// Channels "latency" and "backlog". Deterministic in the generator state.
Trace simulate_trace(const SimParams& params, std::mt19937_64& rng);

/// +1 iff latency < T1 at every step and backlog < T2 on the last five steps.
/// Throws std::invalid_argument when either channel is missing.
Label ground_truth_label(const Trace& trace, const Task& task);

/// The same rule in formula syntax, e.g.
/// "G[0,60](latency < 100) & G[56,60](backlog < 30)".
std::string ground_truth_formula(const Task& task, int steps);

/// n_train + n_valid labeled traces, split in order. Each trace uses its own
/// seed drawn from rng. Redraws (at most 20 times) if the training split
/// misses a class, then throws std::runtime_error.
CalibrationPair make_dataset_pair(const Task& task, std::size_t n_train, std::size_t n_valid, const SimParams& params,
                                  std::mt19937_64& rng);

/// sample_task then make_dataset_pair.
CalibrationPair sample_dataset_pair(std::size_t n_train, std::size_t n_valid, const SimParams& params,
                                    std::mt19937_64& rng);

}  // namespace confstl::tracegen
