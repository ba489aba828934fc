#include "confstl/tracegen.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "confstl/numfmt.hpp"

namespace confstl::tracegen {
namespace {

constexpr int kFinalWindow = 5;
constexpr int kMaxRedraws = 20;

const std::shared_ptr<const ChannelNames>& kpi_names() {
  static const auto names = std::make_shared<const ChannelNames>(ChannelNames{"latency", "backlog"});
  return names;
}

}  // namespace

const std::array<Task, 5>& paper_tasks() {
  static const std::array<Task, 5> tasks{{{100, 30, 0}, {110, 28, 1}, {120, 26, 2}, {130, 24, 3}, {140, 32, 4}}};
  return tasks;
}

Task sample_task(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(paper_tasks().size()) - 1);
  return paper_tasks()[static_cast<std::size_t>(pick(rng))];
}

void SimParams::validate() const {
  if (steps < 2) throw std::invalid_argument("simulation needs at least 2 steps");
  if (!(ar_coefficient >= 0.0 && ar_coefficient < 1.0)) throw std::invalid_argument("ar_coefficient must be in [0,1)");
  if (burst_duration < 0) throw std::invalid_argument("burst_duration must be >= 0");
  for (double v : {base_latency, latency_noise_scale, burst_rate, burst_magnitude, arrival_rate, arrival_noise,
                   burst_arrivals, service_rate}) {
    if (!(v >= 0.0)) throw std::invalid_argument("simulation rates and scales must be >= 0");
  }
  if (burst_rate > 1.0) throw std::invalid_argument("burst_rate is a per-step probability");
}

Trace simulate_trace(const SimParams& params, std::mt19937_64& rng) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.steps);
  std::vector<double> values(2 * n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> unit_exp(1.0);
  std::bernoulli_distribution burst_start(params.burst_rate);

  std::vector<double> burst(n + static_cast<std::size_t>(params.burst_duration), 0.0);
  std::vector<int> active(burst.size(), 0);
  double state = params.base_latency;
  double backlog = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      state = params.base_latency + params.ar_coefficient * (state - params.base_latency) +
              params.latency_noise_scale * gauss(rng);
    }
    if (burst_start(rng)) {
      const double size = params.burst_magnitude * unit_exp(rng);
      for (int k = 0; k < params.burst_duration; ++k) {
        burst[t + static_cast<std::size_t>(k)] += size;
        active[t + static_cast<std::size_t>(k)] = 1;
      }
    }
    double arrivals = params.arrival_rate;
    if (params.arrival_noise > 0.0) arrivals += params.arrival_noise * (unit_exp(rng) - 1.0);
    arrivals = std::max(0.0, arrivals) + (active[t] ? params.burst_arrivals : 0.0);
    backlog = std::max(0.0, backlog + arrivals - params.service_rate);
    values[t] = std::max(0.0, state + burst[t]);
    values[n + t] = backlog;
  }
  return Trace(kpi_names(), n, std::move(values));
}

Label ground_truth_label(const Trace& trace, const Task& task) {
  const auto& names = trace.channel_names();
  const auto lat = std::find(names.begin(), names.end(), "latency");
  const auto blg = std::find(names.begin(), names.end(), "backlog");
  if (lat == names.end() || blg == names.end()) {
    throw std::invalid_argument("labeling needs channels 'latency' and 'backlog'");
  }
  const auto latency = trace.channel(static_cast<std::size_t>(lat - names.begin()));
  const auto backlog = trace.channel(static_cast<std::size_t>(blg - names.begin()));
  const std::size_t n = trace.steps();
  const std::size_t tail = n > kFinalWindow ? n - kFinalWindow : 0;
  const bool latency_ok = std::all_of(latency.begin(), latency.end(), [&](double v) { return v < task.t1; });
  const bool backlog_ok = std::all_of(backlog.begin() + static_cast<std::ptrdiff_t>(tail), backlog.end(),
                                      [&](double v) { return v < task.t2; });
  return latency_ok && backlog_ok ? Label::Positive : Label::Negative;
}

std::string ground_truth_formula(const Task& task, int steps) {
  const int last = steps - 1;
  const int tail = std::max(0, steps - kFinalWindow);
  return "G[0," + std::to_string(last) + "](latency < " + format_double(task.t1) + ") & G[" + std::to_string(tail) +
         "," + std::to_string(last) + "](backlog < " + format_double(task.t2) + ")";
}

CalibrationPair make_dataset_pair(const Task& task, std::size_t n_train, std::size_t n_valid, const SimParams& params,
                                  std::mt19937_64& rng) {
  if (n_train < 1 || n_valid < 1) throw std::invalid_argument("dataset pair needs n_train, n_valid >= 1");
  params.validate();
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    std::vector<Sample> train;
    std::vector<Sample> valid;
    train.reserve(n_train);
    valid.reserve(n_valid);
    for (std::size_t i = 0; i < n_train + n_valid; ++i) {
      std::mt19937_64 local(rng());
      Trace tr = simulate_trace(params, local);
      const Label y = ground_truth_label(tr, task);
      (i < n_train ? train : valid).push_back(Sample{std::move(tr), y});
    }
    LabeledDataset d_train(std::move(train));
    if (!d_train.has_both_labels()) continue;
    return CalibrationPair{std::move(d_train), LabeledDataset(std::move(valid)), task.id};
  }
  throw std::runtime_error("training split kept missing a class after " + std::to_string(kMaxRedraws) + " redraws");
}

CalibrationPair sample_dataset_pair(std::size_t n_train, std::size_t n_valid, const SimParams& params,
                                    std::mt19937_64& rng) {
  const Task task = sample_task(rng);
  return make_dataset_pair(task, n_train, n_valid, params, rng);
}

}  // namespace confstl::tracegen
