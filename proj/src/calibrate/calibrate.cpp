#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "confstl/calibrate.hpp"
#include "confstl/numfmt.hpp"
#include "confstl/robustness.hpp"

namespace confstl {
namespace {

std::vector<std::size_t> index_range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out(last - first);
  std::iota(out.begin(), out.end(), first);
  return out;
}

double pvalue_of(const RiskEstimate& e, double epsilon) {
  return binomial_cdf(static_cast<int>(e.failures), static_cast<int>(e.pairs), epsilon);
}

// Smallest average size, then lower risk, then lexicographic lambda.
bool better(const RiskEstimate& a, const Hyper& la, const RiskEstimate& b, const Hyper& lb) {
  return std::tie(a.avg_set_size, a.risk, la) < std::tie(b.avg_set_size, b.risk, lb);
}

nlohmann::ordered_json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::ordered_json hyper_json(const Hyper& h) {
  return nlohmann::ordered_json::array({number_or_inf(h.lambda1), number_or_inf(h.lambda2), number_or_inf(h.lambda3)});
}

}  // namespace

std::vector<Hyper> default_grid() {
  std::vector<Hyper> grid;
  for (double l1 : {0.33, 0.5, 0.67}) {
    for (double l2 : {0.50, 0.52, 0.54, 0.56, 0.58}) {
      for (double l3 : {0.3, 0.4, 0.5, 0.6, 0.7}) grid.push_back(Hyper{l1, l2, l3});
    }
  }
  return grid;
}

void validate_grid(std::span<const Hyper> grid) {
  if (grid.empty()) throw std::invalid_argument("threshold grid is empty");
  std::set<Hyper> seen;
  for (const auto& h : grid) {
    h.validate();
    if (!seen.insert(h).second) throw std::invalid_argument("threshold grid repeats " + to_string(h));
  }
}

bool accuracy_indicator(const Formula& formula, const LabeledDataset& valid, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("accuracy threshold must lie in [0,1]");
  return accuracy(formula, valid) > phi;
}

RiskEstimate empirical_risk(RiskEvaluator& evaluator, const Hyper& lambda, std::span<const std::size_t> pairs) {
  if (pairs.empty()) throw std::invalid_argument("empirical risk needs at least one pair");
  RiskEstimate e;
  double size_sum = 0.0;
  for (std::size_t k : pairs) {
    const PairOutcome o = evaluator.evaluate(lambda, k);
    e.failures += o.miss ? 1 : 0;
    size_sum += o.set_size;
  }
  e.pairs = pairs.size();
  e.risk = static_cast<double>(e.failures) / static_cast<double>(e.pairs);
  e.avg_set_size = size_sum / static_cast<double>(e.pairs);
  return e;
}

void CalibrationOptions::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw std::invalid_argument("split_fraction must lie in (0,1)");
}

std::vector<Hyper> fixed_sequence_test(std::span<const Hyper> ordered, RiskEvaluator& evaluator,
                                       std::span<const std::size_t> pairs, double epsilon, double delta,
                                       std::vector<std::pair<RiskEstimate, double>>* tested) {
  std::vector<Hyper> valid;
  for (const auto& h : ordered) {
    const RiskEstimate e = empirical_risk(evaluator, h, pairs);
    const double p = pvalue_of(e, epsilon);
    if (tested != nullptr) tested->emplace_back(e, p);
    if (!(p < delta)) break;
    valid.push_back(h);
  }
  return valid;
}

std::vector<Hyper> bonferroni_select(std::span<const Hyper> grid, RiskEvaluator& evaluator,
                                     std::span<const std::size_t> pairs, double epsilon, double delta) {
  std::vector<Hyper> valid;
  const double level = delta / static_cast<double>(grid.size());
  for (const auto& h : grid) {
    if (pvalue_of(empirical_risk(evaluator, h, pairs), epsilon) < level) valid.push_back(h);
  }
  return valid;
}

CalibrationResult calibrate_lambda(std::span<const Hyper> grid, RiskEvaluator& evaluator,
                                   const CalibrationOptions& options) {
  validate_grid(grid);
  options.validate();
  const std::size_t k = evaluator.pair_count();
  if (k == 0) throw std::invalid_argument("calibration set is empty");

  CalibrationResult result;
  result.records.resize(grid.size());
  std::vector<RiskEstimate> testing(grid.size());

  if (options.method == Method::Pareto) {
    const auto n1 = static_cast<std::size_t>(std::llround(options.split_fraction * static_cast<double>(k)));
    if (n1 < 1 || n1 >= k) throw std::invalid_argument("pareto calibration needs both splits non-empty");
    const auto split1 = index_range(0, n1);
    const auto split2 = index_range(n1, k);
    result.split1_pairs = split1.size();
    result.split2_pairs = split2.size();

    std::vector<ScoredCandidate> scored;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto& rec = result.records[i];
      rec.lambda = grid[i];
      rec.split1 = empirical_risk(evaluator, grid[i], split1);
      rec.p_split1 = pvalue_of(rec.split1, options.epsilon);
      scored.push_back({rec.split1.risk, rec.split1.avg_set_size, grid[i], rec.p_split1});
    }
    const auto ordered = pareto_frontier(scored);
    std::vector<std::pair<RiskEstimate, double>> tested;
    result.valid_set = fixed_sequence_test(ordered, evaluator, split2, options.epsilon, options.delta, &tested);
    for (std::size_t j = 0; j < ordered.size(); ++j) {
      const auto i = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), ordered[j]) - grid.begin());
      auto& rec = result.records[i];
      rec.on_frontier = true;
      if (j < tested.size()) {
        rec.tested = true;
        rec.split2 = tested[j].first;
        rec.p_split2 = tested[j].second;
        rec.rejected = tested[j].second < options.delta;
        testing[i] = tested[j].first;
      }
    }
  } else {
    const auto all = index_range(0, k);
    result.split1_pairs = k;
    const double level = options.delta / static_cast<double>(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto& rec = result.records[i];
      rec.lambda = grid[i];
      rec.split1 = empirical_risk(evaluator, grid[i], all);
      rec.p_split1 = pvalue_of(rec.split1, options.epsilon);
      rec.tested = true;
      rec.rejected = rec.p_split1 < level;
      testing[i] = rec.split1;
      if (rec.rejected) result.valid_set.push_back(grid[i]);
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!result.records[i].rejected) continue;
    if (!best || better(testing[i], grid[i], testing[*best], grid[*best])) best = i;
  }
  if (best) {
    result.lambda_star = grid[*best];
    result.fallback_used = false;
  }
  return result;
}

void write_calibration_report_csv(std::ostream& out, const CalibrationResult& result) {
  out << "lambda1,lambda2,lambda3,risk_split1,size_split1,p_split1,on_frontier,tested,p_split2,rejected\n";
  for (const auto& r : result.records) {
    out << format_double(r.lambda.lambda1) << ',' << format_double(r.lambda.lambda2) << ','
        << format_double(r.lambda.lambda3) << ',' << format_double(r.split1.risk) << ','
        << format_double(r.split1.avg_set_size) << ',' << format_double(r.p_split1) << ',' << (r.on_frontier ? 1 : 0)
        << ',' << (r.tested ? 1 : 0) << ',' << (r.p_split2 ? format_double(*r.p_split2) : std::string()) << ','
        << (r.rejected ? 1 : 0) << '\n';
  }
}

void write_calibration_summary_json(std::ostream& out, const CalibrationResult& result,
                                    const CalibrationOptions& options) {
  nlohmann::ordered_json doc;
  doc["method"] = options.method == Method::Pareto ? "pareto" : "bonferroni";
  doc["epsilon"] = options.epsilon;
  doc["delta"] = options.delta;
  doc["split_fraction"] = options.split_fraction;
  doc["split1_pairs"] = result.split1_pairs;
  doc["split2_pairs"] = result.split2_pairs;
  doc["lambda_star"] = hyper_json(result.lambda_star);
  doc["fallback_used"] = result.fallback_used;
  doc["valid_set"] = nlohmann::ordered_json::array();
  for (const auto& h : result.valid_set) doc["valid_set"].push_back(hyper_json(h));
  out << doc.dump(2) << '\n';
}

}  // namespace confstl
