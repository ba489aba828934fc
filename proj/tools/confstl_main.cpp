#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "confstl/calibrate.hpp"
#include "confstl/experiment.hpp"
#include "confstl/numfmt.hpp"
#include "confstl/robustness.hpp"
#include "confstl/setgen.hpp"
#include "confstl/tracegen.hpp"

namespace fs = std::filesystem;
using namespace confstl;
using experiment::ExperimentConfig;

namespace {

struct Common {
  std::string config_path;
  bool desk = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "flat key = value config file")->check(CLI::ExistingFile);
  app->add_flag("--desk-scale", c.desk, "500/200 traces, 40 calibration and 20 test pairs");
  app->add_option("--seed", c.seed, "seed");
  app->add_option("--out", c.out, "output directory");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = experiment::load_config(c.config_path, cfg);
  if (c.desk) cfg.apply_desk_scale();
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v) throw CLI::ValidationError("expected a comma-separated list of numbers, got '" + text + "'");
    out.push_back(*v);
  }
  return out;
}

Hyper parse_hyper(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3) throw CLI::ValidationError("--lambda expects lambda1,lambda2,lambda3");
  Hyper h{v[0], v[1], v[2]};
  h.validate();
  return h;
}

std::string dataset_name(const std::string& stem, std::size_t k, std::size_t count) {
  return count == 1 ? stem + ".csv" : stem + "_" + std::to_string(k) + ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal STL formula-set learning"};
  app.require_subcommand(1);

  Common sim_c;
  int task_id = -1;
  std::size_t pairs = 1;
  auto* sim = app.add_subcommand("simulate", "simulate labeled latency/backlog datasets");
  add_common(sim, sim_c);
  sim->add_option("--task", task_id, "task index 0-4; random when omitted")->check(CLI::Range(0, 4));
  sim->add_option("--pairs", pairs, "number of (train, valid) pairs")->check(CLI::PositiveNumber);

  Common learn_c;
  std::string train_path;
  std::string valid_path;
  auto* learn = app.add_subcommand("learn", "learn one formula from a labeled dataset");
  add_common(learn, learn_c);
  learn->add_option("--train", train_path, "training dataset CSV")->required()->check(CLI::ExistingFile);
  learn->add_option("--valid", valid_path, "validation dataset CSV")->check(CLI::ExistingFile);

  Common gen_c;
  std::string lambda_text = "inf,0,inf";
  auto* gen = app.add_subcommand("generate", "generate a formula set with explicit thresholds");
  add_common(gen, gen_c);
  gen->add_option("--train", train_path, "training dataset CSV")->required()->check(CLI::ExistingFile);
  gen->add_option("--valid", valid_path, "validation dataset CSV")->check(CLI::ExistingFile);
  gen->add_option("--lambda", lambda_text, "lambda1,lambda2,lambda3");

  Common cal_c;
  std::string method_name = "cstll";
  std::string eps_text;
  auto* cal = app.add_subcommand("calibrate", "calibrate thresholds on simulated calibration pairs");
  add_common(cal, cal_c);
  cal->add_option("--method", method_name, "cstll, stopping_only, complexity_stopping, diversity_stopping, bonferroni");
  cal->add_option("--epsilon", eps_text, "risk tolerance");

  Common exp_c;
  std::string methods_text;
  auto* exp = app.add_subcommand("experiment", "run the benchmark matrix");
  add_common(exp, exp_c);
  exp->add_option("--method", methods_text, "comma-separated method names");
  exp->add_option("--epsilon", eps_text, "comma-separated risk tolerances");

  std::string metrics_path;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "summarize metrics.csv and draw plots");
  rep->add_option("--in", metrics_path, "metrics.csv")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", report_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      auto cfg = resolve(sim_c);
      const fs::path out = sim_c.out.empty() ? fs::path(".") : fs::path(sim_c.out);
      std::mt19937_64 rng(cfg.seeds.front());
      for (std::size_t k = 0; k < pairs; ++k) {
        const auto task = task_id >= 0 ? tracegen::paper_tasks()[static_cast<std::size_t>(task_id)]
                                       : tracegen::sample_task(rng);
        const auto pair = tracegen::make_dataset_pair(task, cfg.n_train, cfg.n_valid, cfg.sim, rng);
        fs::create_directories(out);
        save_dataset((out / dataset_name("train", k, pairs)).string(), pair.train);
        save_dataset((out / dataset_name("valid", k, pairs)).string(), pair.valid);
        std::cout << "pair " << k << ": task " << task.id << " ("
                  << tracegen::ground_truth_formula(task, cfg.sim.steps) << "), " << pair.train.size() << "/"
                  << pair.valid.size() << " traces\n";
      }
    } else if (learn->parsed()) {
      auto cfg = resolve(learn_c);
      const auto train = load_dataset(train_path);
      const auto f = learn::train_formula(train, cfg.learner, cfg.seeds.front());
      std::cout << format_formula(f, train.channel_names()) << '\n';
      std::cout << "train accuracy " << format_fixed(accuracy(f, train), 4) << '\n';
      if (!valid_path.empty()) {
        std::cout << "valid accuracy " << format_fixed(accuracy(f, load_dataset(valid_path)), 4) << '\n';
      }
    } else if (gen->parsed()) {
      auto cfg = resolve(gen_c);
      const Hyper lambda = parse_hyper(lambda_text);
      const auto train = load_dataset(train_path);
      std::optional<LabeledDataset> valid;
      if (!valid_path.empty()) valid = load_dataset(valid_path);
      CandidateStream stream(train, cfg.learner, cfg.seeds.front(), valid ? &*valid : nullptr);
      const auto set = generate_set(stream, lambda, cfg.l_max);
      for (const auto& m : set.accepted) {
        std::cout << m.iteration << ": " << format_formula(m.formula, train.channel_names()) << "  H="
                  << format_fixed(m.complexity, 3) << " Q=" << format_fixed(m.quality, 3);
        if (m.accuracy) std::cout << " acc=" << format_fixed(*m.accuracy, 3);
        std::cout << '\n';
      }
      if (!gen_c.out.empty()) {
        const fs::path out = gen_c.out;
        experiment::write_file_atomic(out / "formula_set.json", [&](std::ostream& o) {
          write_formula_set_json(o, set, train.channel_names());
        });
        experiment::write_file_atomic(out / "generation_log.csv",
                                      [&](std::ostream& o) { write_generation_log_csv(o, set); });
      }
    } else if (cal->parsed()) {
      auto cfg = resolve(cal_c);
      cfg.validate();
      const auto method = experiment::parse_variant(method_name);
      if (method == experiment::Variant::Stll) throw std::invalid_argument("stll has no calibration stage");
      CalibrationOptions options;
      if (!eps_text.empty()) options.epsilon = parse_list(eps_text).at(0);
      options.delta = cfg.delta;
      options.split_fraction = cfg.split_fraction;
      options.method = method == experiment::Variant::Bonferroni ? Method::Bonferroni : Method::Pareto;
      cfg.n_test_pairs = 0;
      const std::uint64_t seed = cfg.seeds.front();
      const auto data = experiment::make_seed_data(cfg, seed);
      StreamEvaluator evaluator(data.calibration, cfg.learner, cfg.l_max, seed, cfg.phi);
      const auto grid = experiment::restricted_grid(method, cfg.grid());
      const auto result = calibrate_lambda(grid, evaluator, options);
      write_calibration_summary_json(std::cout, result, options);
      if (!cal_c.out.empty()) {
        const fs::path out = cal_c.out;
        experiment::write_file_atomic(out / "calibration_report.csv",
                                      [&](std::ostream& o) { write_calibration_report_csv(o, result); });
        experiment::write_file_atomic(out / "calibration_summary.json",
                                      [&](std::ostream& o) { write_calibration_summary_json(o, result, options); });
      }
    } else if (exp->parsed()) {
      auto cfg = resolve(exp_c);
      if (!methods_text.empty()) {
        cfg.methods.clear();
        std::stringstream ss(methods_text);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.methods.push_back(experiment::parse_variant(item));
      }
      if (!eps_text.empty()) cfg.epsilons = parse_list(eps_text);
      experiment::run_experiment(cfg, [](const experiment::MetricsRow& r) {
        std::cerr << experiment::to_string(r.method) << " eps=" << format_double(r.epsilon) << " seed=" << r.seed
                  << " risk=" << format_fixed(r.metrics.avg_risk, 3)
                  << " size=" << format_fixed(r.metrics.avg_set_size, 2) << '\n';
      });
      std::cout << "wrote " << (fs::path(cfg.out_dir) / "metrics.csv").string() << '\n';
    } else if (rep->parsed()) {
      std::ifstream in(metrics_path);
      const auto rows = experiment::read_metrics_csv(in);
      const auto summary = experiment::summarize(rows);
      const fs::path out = report_out;
      experiment::write_file_atomic(out / "summary.csv",
                                    [&](std::ostream& o) { experiment::write_summary_csv(o, summary); });
      experiment::write_plots(out / "plots", summary);
      std::cout << "wrote " << (out / "summary.csv").string() << " and " << (out / "plots").string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
