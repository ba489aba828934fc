// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance [--only 1,2,...] [--out DIR] [--metrics FILE]
//
// --metrics reuses a finished desk matrix (metrics.csv inside DIR layout)
// instead of recomputing it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confstl/calibrate.hpp"
#include "confstl/experiment.hpp"
#include "confstl/formula.hpp"
#include "confstl/numfmt.hpp"
#include "confstl/robustness.hpp"
#include "confstl/setgen.hpp"
#include "confstl/tracegen.hpp"
#include "support/binomial_oracle.hpp"
#include "support/learner_support.hpp"
#include "support/reference.hpp"

using namespace confstl;
namespace fs = std::filesystem;
using experiment::Variant;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

// 1 --------------------------------------------------------------------------

Outcome robustness_oracle() {
  const auto start = Clock::now();
  const auto names = std::make_shared<const ChannelNames>(ChannelNames{"x", "y"});
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t evaluated = 0;
  std::size_t sign_mismatch = 0;
  std::size_t error_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    const Formula f = ref::random_formula(rng, 2, 3, 4, 8);
    const Trace x = ref::random_trace(rng, names, 20, 2.0);
    for (std::size_t t = 0; t < 20; ++t) {
      double expected = 0.0;
      bool ref_throws = false;
      try {
        expected = ref::robustness(f, x, t);
      } catch (const ref::EmptyWindow&) {
        ref_throws = true;
      }
      try {
        const double got = eval_robustness(f, x, t);
        if (ref_throws) {
          ++error_mismatch;
          continue;
        }
        ++evaluated;
        worst = std::max(worst, std::abs(got - expected));
        if (got != 0.0 && (got > 0.0) != ref::satisfied(f, x, t)) ++sign_mismatch;
      } catch (const EvaluationError&) {
        if (!ref_throws) ++error_mismatch;
      }
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = worst <= 1e-9 && sign_mismatch == 0 && error_mismatch == 0 && secs < 10.0 && evaluated > 0;
  o.detail = std::to_string(evaluated) + " evaluations, max |diff| " + format_double(worst) + ", sign mismatches " +
             std::to_string(sign_mismatch) + ", empty-window mismatches " + std::to_string(error_mismatch) + ", " +
             fmt(secs, 2) + " s";
  return o;
}

// 2 --------------------------------------------------------------------------

Outcome pvalue_exactness() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int k = 1; k <= 200; ++k) {
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.9}) {
      const auto table = ref::binomial_cdf_table_mp(k, eps);
      for (int f = 0; f <= k; ++f) {
        const double risk = static_cast<double>(f) / k;
        worst = std::max(worst, std::abs(binomial_pvalue(risk, k, eps) - table[static_cast<std::size_t>(f)]));
      }
    }
  }
  std::mt19937_64 rng(2002);
  const int reps = 2000;
  bool uniform_ok = true;
  double worst_excess = -1.0;
  for (int k : {20, 50}) {
    for (double eps : {0.1, 0.2, 0.3}) {
      for (double shift : {0.0, 0.05}) {
        std::binomial_distribution<int> draw(k, eps + shift);
        std::vector<double> p(reps);
        for (double& v : p) v = binomial_pvalue(static_cast<double>(draw(rng)) / k, k, eps);
        for (double alpha : {0.01, 0.05, 0.1}) {
          const double freq =
              static_cast<double>(std::count_if(p.begin(), p.end(), [&](double v) { return v <= alpha; })) / reps;
          const double se = std::sqrt(alpha * (1 - alpha) / reps);
          worst_excess = std::max(worst_excess, (freq - alpha) / se);
          uniform_ok = uniform_ok && freq <= alpha + 3 * se;
        }
      }
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = worst <= 1e-12 && uniform_ok && secs < 30.0;
  o.detail = "max |p - exact| " + format_double(worst) + " over K <= 200; largest null rejection excess " +
             fmt(worst_excess, 2) + " SE (limit 3); " + fmt(secs, 2) + " s";
  return o;
}

// 3 --------------------------------------------------------------------------

Outcome fwer_control() {
  const auto start = Clock::now();
  const double eps = 0.2;
  const double delta = 0.05;
  const int reps = 500;
  const auto grid = default_grid();
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<Method, int> any_valid;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> risk(grid.size());
    std::vector<double> size(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // a third of the candidates sit exactly on the boundary
      risk[i] = i % 3 == 0 ? eps : eps + 0.15 * unit(rng);
      size[i] = 1.0 + 9.0 * unit(rng);
    }
    SyntheticEvaluator ev(grid, risk, size, 40, rng);
    for (Method m : {Method::Pareto, Method::Bonferroni}) {
      CalibrationOptions opt;
      opt.epsilon = eps;
      opt.delta = delta;
      opt.method = m;
      if (!calibrate_lambda(grid, ev, opt).valid_set.empty()) ++any_valid[m];
    }
  }
  const double se = std::sqrt(delta * (1 - delta) / reps);
  const double fp = static_cast<double>(any_valid[Method::Pareto]) / reps;
  const double fb = static_cast<double>(any_valid[Method::Bonferroni]) / reps;
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = fp <= delta + 3 * se && fb <= delta + 3 * se && secs < 120.0;
  o.detail = "false-validity rate pareto " + fmt(fp) + ", bonferroni " + fmt(fb) + " (limit " + fmt(delta + 3 * se) +
             "), " + fmt(secs, 2) + " s";
  return o;
}

// 4, 5, 7 (matrix audit) -----------------------------------------------------

experiment::ExperimentConfig desk_config(const fs::path& out) {
  experiment::ExperimentConfig c;
  c.apply_desk_scale();
  c.l_max = 10;
  c.delta = 0.05;
  c.phi = 0.8;
  c.epsilons = {0.1, 0.2, 0.3};
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  c.out_dir = out.string();
  return c;
}

std::vector<experiment::MetricsRow> load_rows(const fs::path& metrics) {
  std::ifstream in(metrics);
  if (!in) throw std::runtime_error("cannot open " + metrics.string());
  return experiment::read_metrics_csv(in);
}

std::vector<experiment::MetricsRow> desk_matrix(const fs::path& out, const std::string& reuse) {
  if (!reuse.empty()) return load_rows(reuse);
  const auto start = Clock::now();
  auto config = desk_config(out);
  std::size_t done = 0;
  const std::size_t total = config.methods.size() * config.epsilons.size() * config.seeds.size();
  const auto rows = experiment::run_experiment(config, [&](const experiment::MetricsRow&) {
    if (++done % 18 == 0) std::cerr << "desk matrix: " << done << "/" << total << " cells\n";
  });
  std::cerr << "desk matrix finished in " << fmt(seconds_since(start), 1) << " s\n";
  return rows;
}

Outcome risk_control(const std::vector<experiment::MetricsRow>& rows) {
  const auto summary = experiment::summarize(rows);
  bool ok = true;
  std::ostringstream d;
  int cells = 0;
  for (double eps : {0.1, 0.2, 0.3}) {
    const experiment::Stat* c = nullptr;
    const experiment::Stat* s = nullptr;
    for (const auto& r : summary) {
      if (std::abs(r.epsilon - eps) > 1e-12) continue;
      if (r.method == Variant::Cstll) c = &r.risk;
      if (r.method == Variant::Stll) s = &r.risk;
    }
    if (!c || c->n == 0) {
      ok = false;
      d << "eps " << eps << ": no cstll rows; ";
      continue;
    }
    ++cells;
    ok = ok && c->mean <= eps + 0.10;
    d << "eps " << format_double(eps) << ": cstll " << fmt(c->mean, 3) << " +- " << fmt(c->se, 3) << " (limit "
      << format_double(eps + 0.10) << ")";
    if (s) d << ", stll " << fmt(s->mean, 3) << " +- " << fmt(s->se, 3);
    d << "; ";
  }
  Outcome o;
  o.pass = ok && cells == 3;
  o.detail = d.str() + "n = " + std::to_string(rows.size() / 18) + " seeds";
  return o;
}

// Seed-level means pooled over epsilon, then mean and standard error over seeds.
experiment::Stat pooled(const std::vector<experiment::MetricsRow>& rows, Variant method,
                        std::optional<double> (*field)(const experiment::SetMetrics&)) {
  std::map<std::uint64_t, std::pair<double, int>> per_seed;
  for (const auto& r : rows) {
    const auto v = field(r.metrics);
    if (r.method != method || !v) continue;
    auto& acc = per_seed[r.seed];
    acc.first += *v;
    acc.second += 1;
  }
  std::vector<double> xs;
  for (const auto& [seed, acc] : per_seed) xs.push_back(acc.first / acc.second);
  experiment::Stat s;
  s.n = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

std::string stat_text(const experiment::Stat& s) {
  return s.n == 0 ? "n/a" : fmt(s.mean, 4) + " +- " + fmt(s.se, 4);
}

Outcome ablation_order(const std::vector<experiment::MetricsRow>& rows) {
  using experiment::SetMetrics;
  auto complexity_of = [](const SetMetrics& m) { return m.avg_complexity; };
  auto diversity_of = [](const SetMetrics& m) { return m.avg_diversity; };
  auto size_of = [](const SetMetrics& m) { return std::optional<double>(m.avg_set_size); };
  const auto cx_stop = pooled(rows, Variant::StoppingOnly, complexity_of);
  const auto cx_cs = pooled(rows, Variant::ComplexityStopping, complexity_of);
  const auto dv_cs = pooled(rows, Variant::ComplexityStopping, diversity_of);
  const auto dv_ds = pooled(rows, Variant::DiversityStopping, diversity_of);
  const bool a = cx_cs.n > 0 && cx_stop.n > 0 && cx_cs.mean <= cx_stop.mean;
  const bool b = dv_ds.n > 0 && dv_cs.n > 0 && dv_ds.mean >= dv_cs.mean;
  std::map<Variant, experiment::Stat> size;
  for (Variant v : {Variant::Cstll, Variant::StoppingOnly, Variant::ComplexityStopping, Variant::DiversityStopping,
                    Variant::Bonferroni}) {
    size[v] = pooled(rows, v, size_of);
  }
  bool c = size[Variant::Cstll].n > 0;
  for (const auto& [v, s] : size) c = c && (v == Variant::Cstll || size[Variant::Cstll].mean <= s.mean);
  std::ostringstream d;
  d << "complexity: complexity_stopping " << stat_text(cx_cs) << " vs stopping_only " << stat_text(cx_stop)
    << (a ? " ok" : " VIOLATED") << "; diversity: diversity_stopping " << stat_text(dv_ds)
    << " vs complexity_stopping " << stat_text(dv_cs) << (b ? " ok" : " VIOLATED") << "; set size:";
  for (const auto& [v, s] : size) d << ' ' << experiment::to_string(v) << ' ' << stat_text(s);
  d << (c ? " ok" : " VIOLATED");
  return {a && b && c, d.str()};
}

// 6 --------------------------------------------------------------------------

// Balanced classes under the latency-only rule: simulated traces are drawn in
// order and the first `per_class` of each label are kept.
LabeledDataset balanced_latency_data(std::mt19937_64& rng, std::size_t per_class, const Formula& rule) {
  const tracegen::SimParams params;
  std::vector<Sample> pos, neg;
  for (int draws = 0; pos.size() < per_class || neg.size() < per_class; ++draws) {
    if (draws > 200000) throw std::runtime_error("simulator rarely produces one of the classes");
    Trace x = tracegen::simulate_trace(params, rng);
    const Label y = classify(rule, x);
    auto& bucket = y == Label::Positive ? pos : neg;
    if (bucket.size() < per_class) bucket.push_back({std::move(x), y});
  }
  std::vector<Sample> items;
  for (std::size_t i = 0; i < per_class; ++i) {
    items.push_back(std::move(pos[i]));
    items.push_back(std::move(neg[i]));
  }
  return LabeledDataset(std::move(items));
}

Outcome learner_sanity() {
  const auto start = Clock::now();
  const ChannelNames names{"latency", "backlog"};
  const Formula rule = parse_formula("G[0,60](latency < 100)", names);
  const auto config = learn::TemplateConfig::tuned();
  int good = 0;
  std::ostringstream accs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(6000 + seed);
    const auto train = balanced_latency_data(rng, 250, rule);
    const auto valid = balanced_latency_data(rng, 100, rule);
    const Formula f = learn::train_formula(train, config, seed);
    const double acc = accuracy(f, valid);
    good += acc >= 0.8;
    accs << (seed > 1 ? " " : "") << fmt(acc, 3);
  }

  std::mt19937_64 rng(6100);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto k = static_cast<std::size_t>(2 + i % 5);
    const int steps = 10 + static_cast<int>(unit(rng) * 52);
    const auto p = ref::random_params(rng, k, 2, steps);
    const auto x = ref::random_trace(rng, std::make_shared<const ChannelNames>(names), static_cast<std::size_t>(steps),
                                     2.0);
    worst = std::max(worst, ref::max_relative_error(p, x, 0.5 + 4.5 * unit(rng)));
  }
  Outcome o;
  o.pass = good >= 7 && worst <= 1e-4;
  o.detail = std::to_string(good) + "/10 seeds reach held-out accuracy >= 0.8 (" + accs.str() +
             "); max gradient relative error " + format_double(worst) + " over 100 configurations; " +
             fmt(seconds_since(start), 1) + " s";
  return o;
}

// 7 --------------------------------------------------------------------------

struct AuditCount {
  std::size_t sets = 0;
  std::size_t violations = 0;
};

void audit_set(const std::vector<Formula>& members, const LabeledDataset& train, const Hyper& h, int l_max,
               AuditCount& count) {
  ++count.sets;
  bool ok = members.size() <= static_cast<std::size_t>(l_max);
  std::vector<std::vector<double>> rho;
  for (const auto& f : members) {
    ok = ok && complexity(f) < h.lambda1;
    rho.push_back(robustness_at_origin(f, train));
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) ok = ok && distance_from_robustness(rho[i], rho[j]) > h.lambda2;
  }
  count.violations += ok ? 0 : 1;
}

// Audits the formula sets written by the desk matrix against regenerated data.
void audit_matrix(const fs::path& out, const std::vector<experiment::MetricsRow>& rows, AuditCount& count) {
  const auto config = desk_config(out);
  std::map<std::uint64_t, experiment::SeedData> data;
  for (const auto& r : rows) {
    if (!data.count(r.seed)) data.emplace(r.seed, experiment::make_seed_data(config, r.seed));
    const auto& test = data.at(r.seed).test;
    const auto dir = out / "cells" / std::string(experiment::to_string(r.method)) /
                     ("eps_" + format_double(r.epsilon)) / ("seed_" + std::to_string(r.seed)) / "sets";
    const int l_max = r.method == Variant::Stll ? 1 : config.l_max;
    for (std::size_t k = 0; k < test.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "pair_%03zu.json", k);
      std::ifstream in(dir / name);
      if (!in) throw std::runtime_error("missing " + (dir / name).string());
      std::vector<Formula> members;
      for (auto& a : read_formula_set_json(in, test[k].train.channel_names())) members.push_back(a.formula);
      audit_set(members, test[k].train, r.lambda_star, l_max, count);
    }
  }
}

Outcome structural(const fs::path& out, const std::vector<experiment::MetricsRow>* matrix) {
  const auto start = Clock::now();
  std::ostringstream d;
  bool ok = true;

  // set audit over the full grid on one pair per task, plus the fallback size
  AuditCount audit;
  bool fallback_ok = true;
  const auto grid = default_grid();
  std::mt19937_64 rng(7007);
  for (const auto& task : tracegen::paper_tasks()) {
    const auto pair = tracegen::make_dataset_pair(task, 500, 200, tracegen::SimParams{}, rng);
    CandidateStream stream(pair.train, learn::TemplateConfig::tuned(), 70 + static_cast<std::uint64_t>(task.id),
                           &pair.valid);
    for (const auto& h : grid) {
      std::vector<Formula> members;
      for (auto& a : generate_set(stream, h, 10).accepted) members.push_back(a.formula);
      audit_set(members, pair.train, h, 10, audit);
    }
    fallback_ok = fallback_ok && generate_set(stream, Hyper::fallback(), 10).size() == 10;
  }
  if (matrix) audit_matrix(out, *matrix, audit);
  ok = ok && audit.violations == 0 && fallback_ok;
  d << "set audit " << audit.violations << " violations in " << audit.sets << " sets; fallback gives L_max "
    << (fallback_ok ? "yes" : "NO");

  // fixed-sequence output is the prefix of rejected p-values
  int prefix_bad = 0;
  for (int r = 0; r < 200; ++r) {
    std::vector<Hyper> order(grid.begin(), grid.end());
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(20);
    std::vector<double> risk, size;
    for (std::size_t i = 0; i < order.size(); ++i) {
      risk.push_back(std::uniform_real_distribution<double>(0.0, 0.4)(rng));
      size.push_back(1.0);
    }
    SyntheticEvaluator ev(order, risk, size, 40, rng);
    std::vector<std::size_t> pairs(40);
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = i;
    const auto valid = fixed_sequence_test(order, ev, pairs, 0.2, 0.05);
    std::vector<double> p;
    for (const auto& h : order) {
      const auto e = empirical_risk(ev, h, pairs);
      p.push_back(binomial_cdf(static_cast<int>(e.failures), 40, 0.2));
    }
    const std::size_t m = fixed_sequence_prefix(p, 0.05);
    const bool is_prefix = valid.size() == m && std::equal(valid.begin(), valid.end(), order.begin());
    prefix_bad += is_prefix ? 0 : 1;
  }
  ok = ok && prefix_bad == 0;
  d << "; fixed-sequence non-prefix outputs " << prefix_bad << "/200";

  // Pareto frontier against the quadratic dominance oracle
  int frontier_bad = 0;
  for (int cloud = 0; cloud < 100; ++cloud) {
    std::uniform_int_distribution<int> coarse(0, 8);
    std::vector<ScoredCandidate> pts;
    for (int i = 0; i < 10 + cloud % 40; ++i) {
      pts.push_back({coarse(rng) / 8.0, static_cast<double>(coarse(rng)), Hyper{0.01 * i, 0.5, 0.5},
                     std::uniform_real_distribution<double>(0, 1)(rng)});
    }
    std::vector<const ScoredCandidate*> kept;
    for (const auto& a : pts) {
      bool dominated = false;
      for (const auto& b : pts) {
        dominated = dominated || (b.risk <= a.risk && b.size <= a.size && (b.risk < a.risk || b.size < a.size));
      }
      if (!dominated) kept.push_back(&a);
    }
    std::sort(kept.begin(), kept.end(), [](auto* a, auto* b) {
      return std::tie(a->p_value, a->risk, a->lambda) < std::tie(b->p_value, b->risk, b->lambda);
    });
    const auto got = pareto_frontier(pts);
    bool same = got.size() == kept.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i] == kept[i]->lambda;
    frontier_bad += same ? 0 : 1;
  }
  ok = ok && frontier_bad == 0;
  d << "; frontier mismatches " << frontier_bad << "/100";

  // distance bounds
  const auto names = std::make_shared<const ChannelNames>(ChannelNames{"x", "y"});
  bool d_ok = true;
  for (int i = 0; i < 300; ++i) {
    std::vector<Sample> items;
    const double scale = i % 3 == 0 ? 1e4 : 2.0;
    for (int j = 0; j < 30; ++j) {
      items.push_back({ref::random_trace(rng, names, 20, scale), j % 2 ? Label::Positive : Label::Negative});
    }
    const LabeledDataset data(std::move(items));
    const Formula f = ref::random_formula(rng, 2, 2, 3, 6, false);
    const Formula g = ref::random_formula(rng, 2, 2, 3, 6, false);
    const double self = distance(f, f, data);
    const double other = distance(f, g, data);
    d_ok = d_ok && self == 0.5 && other >= 0.5 && other < 1.0;
  }
  ok = ok && d_ok;
  d << "; D(phi,phi) = 0.5 and D in [0.5,1) " << (d_ok ? "hold" : "FAIL") << "; " << fmt(seconds_since(start), 1)
    << " s";
  return {ok, d.str()};
}

// 8 --------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& out) {
  experiment::ExperimentConfig c;
  c.n_train = 120;
  c.n_valid = 60;
  c.n_cal_pairs = 8;
  c.n_test_pairs = 4;
  c.l_max = 4;
  c.seeds = {1, 2, 3};
  c.learner.epochs = 4;
  const fs::path a = out / "determinism_a";
  const fs::path b = out / "determinism_b";
  fs::remove_all(a);
  fs::remove_all(b);
  c.out_dir = a.string();
  experiment::run_experiment(c);
  c.out_dir = b.string();
  experiment::run_experiment(c);
  const auto x = slurp(a / "metrics.csv");
  const auto y = slurp(b / "metrics.csv");
  return {!x.empty() && x == y, "two runs of " + std::to_string(std::count(x.begin(), x.end(), '\n') - 1) +
                                    " rows: metrics.csv " + (x == y ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  std::string out = "acceptance_out";
  std::string reuse;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  app.add_option("--out", out, "Directory for experiment outputs");
  app.add_option("--metrics", reuse, "Reuse the desk matrix metrics.csv written under --out");
  CLI11_PARSE(app, argc, argv);
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  fs::create_directories(out);

  try {
    if (wanted(1)) report(1, "robustness oracle", robustness_oracle());
    if (wanted(2)) report(2, "p-value exactness and validity", pvalue_exactness());
    if (wanted(3)) report(3, "FWER control", fwer_control());
    std::vector<experiment::MetricsRow> rows;
    const bool matrix = wanted(4) || wanted(5) || wanted(7);
    if (matrix) rows = desk_matrix(fs::path(out) / "desk", reuse);
    if (wanted(4)) report(4, "risk control", risk_control(rows));
    if (wanted(5)) report(5, "ablation ordering", ablation_order(rows));
    if (wanted(6)) report(6, "learner sanity", learner_sanity());
    if (wanted(7)) report(7, "structural invariants", structural(fs::path(out) / "desk", matrix ? &rows : nullptr));
    if (wanted(8)) report(8, "determinism", determinism(out));
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
