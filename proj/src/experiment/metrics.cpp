#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "confstl/experiment.hpp"
#include "confstl/numfmt.hpp"

namespace confstl::experiment {
namespace {

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : "n/a"; }

std::optional<double> optional_value(const std::string& s) {
  if (s == "n/a") return std::nullopt;
  const auto v = parse_double(s);
  if (!v) throw std::invalid_argument("metrics.csv: bad number '" + s + "'");
  return v;
}

double required_value(const std::string& s) {
  const auto v = optional_value(s);
  if (!v) throw std::invalid_argument("metrics.csv: missing value");
  return *v;
}

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

std::string stat_text(const Stat& s) {
  if (s.n == 0) return "n/a,n/a,0";
  return format_double(s.mean) + ',' + format_double(s.se) + ',' + std::to_string(s.n);
}

}  // namespace

SetMetrics compute_metrics(std::span<const FormulaSet> sets, std::span<const CalibrationPair> pairs, double phi,
                           int capacity) {
  if (sets.empty()) throw std::invalid_argument("compute_metrics needs at least one pair");
  if (sets.size() != pairs.size()) throw std::invalid_argument("compute_metrics needs one set per pair");
  std::size_t misses = 0;
  double size_sum = 0.0;
  double complexity_sum = 0.0;
  std::size_t formulas = 0;
  double diversity_sum = 0.0;
  std::size_t diverse_sets = 0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& members = sets[k].accepted;
    bool hit = false;
    for (const auto& m : members) {
      hit = hit || accuracy_indicator(m.formula, pairs[k].valid, phi);
      complexity_sum += complexity(m.formula, capacity);
      ++formulas;
    }
    misses += hit ? 0 : 1;
    size_sum += static_cast<double>(members.size());
    if (members.size() >= 2) {
      std::vector<std::vector<double>> rho;
      for (const auto& m : members) rho.push_back(robustness_at_origin(m.formula, pairs[k].train));
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        for (std::size_t j = i + 1; j < rho.size(); ++j) {
          sum += distance_from_robustness(rho[i], rho[j]);
          ++n;
        }
      }
      diversity_sum += sum / static_cast<double>(n);
      ++diverse_sets;
    }
  }
  const auto n = static_cast<double>(sets.size());
  SetMetrics out;
  out.avg_risk = static_cast<double>(misses) / n;
  out.avg_set_size = size_sum / n;
  if (formulas > 0) out.avg_complexity = complexity_sum / static_cast<double>(formulas);
  if (diverse_sets > 0) out.avg_diversity = diversity_sum / static_cast<double>(diverse_sets);
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << "method,epsilon,seed,avg_risk,avg_set_size,avg_complexity,avg_diversity,lambda1,lambda2,lambda3,fallback\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << format_double(r.epsilon) << ',' << r.seed << ','
        << format_double(r.metrics.avg_risk) << ',' << format_double(r.metrics.avg_set_size) << ','
        << optional_text(r.metrics.avg_complexity) << ',' << optional_text(r.metrics.avg_diversity) << ','
        << format_double(r.lambda_star.lambda1) << ',' << format_double(r.lambda_star.lambda2) << ','
        << format_double(r.lambda_star.lambda3) << ',' << (r.fallback_used ? 1 : 0) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("metrics.csv is empty");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw std::invalid_argument("metrics.csv: expected 11 columns in '" + line + "'");
    MetricsRow r;
    r.method = parse_variant(f[0]);
    r.epsilon = required_value(f[1]);
    r.seed = std::stoull(f[2]);
    r.metrics.avg_risk = required_value(f[3]);
    r.metrics.avg_set_size = required_value(f[4]);
    r.metrics.avg_complexity = optional_value(f[5]);
    r.metrics.avg_diversity = optional_value(f[6]);
    r.lambda_star = Hyper{required_value(f[7]), required_value(f[8]), required_value(f[9])};
    r.fallback_used = f[10] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const MetricsRow> rows) {
  struct Acc {
    std::vector<double> risk, size, complexity, diversity;
  };
  std::map<std::tuple<int, double>, Acc> groups;
  for (const auto& r : rows) {
    auto& g = groups[{static_cast<int>(r.method), r.epsilon}];
    g.risk.push_back(r.metrics.avg_risk);
    g.size.push_back(r.metrics.avg_set_size);
    if (r.metrics.avg_complexity) g.complexity.push_back(*r.metrics.avg_complexity);
    if (r.metrics.avg_diversity) g.diversity.push_back(*r.metrics.avg_diversity);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, g] : groups) {
    SummaryRow s;
    s.method = static_cast<Variant>(std::get<0>(key));
    s.epsilon = std::get<1>(key);
    s.risk = stat_of(g.risk);
    s.set_size = stat_of(g.size);
    s.complexity = stat_of(g.complexity);
    s.diversity = stat_of(g.diversity);
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "method,epsilon,risk_mean,risk_se,risk_n,set_size_mean,set_size_se,set_size_n,complexity_mean,"
         "complexity_se,complexity_n,diversity_mean,diversity_se,diversity_n\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << format_double(r.epsilon) << ',' << stat_text(r.risk) << ','
        << stat_text(r.set_size) << ',' << stat_text(r.complexity) << ',' << stat_text(r.diversity) << '\n';
  }
}

}  // namespace confstl::experiment
