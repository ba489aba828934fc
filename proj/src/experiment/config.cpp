#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "confstl/experiment.hpp"
#include "confstl/numfmt.hpp"

namespace confstl::experiment {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  const auto v = parse_double(value);
  if (!v) throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  return *v;
}

long long to_integer(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw std::invalid_argument("config key '" + key + "': not an integer: " + value);
  }
  return static_cast<long long>(v);
}

std::size_t to_size(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < 0) throw std::invalid_argument("config key '" + key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || end != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + key + "': not a non-negative integer: " + value);
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected true or false");
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values, auto fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

using Setter = void (*)(ExperimentConfig&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"methods",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         c.methods.clear();
         for (const auto& item : split_list(v)) c.methods.push_back(parse_variant(item));
       }},
      {"epsilons", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.epsilons = to_doubles(k, v); }},
      {"delta", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.delta = to_double(k, v); }},
      {"phi", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.phi = to_double(k, v); }},
      {"split_fraction",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.split_fraction = to_double(k, v); }},
      {"grid_lambda1",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.grid_lambda1 = to_doubles(k, v); }},
      {"grid_lambda2",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.grid_lambda2 = to_doubles(k, v); }},
      {"grid_lambda3",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.grid_lambda3 = to_doubles(k, v); }},
      {"n_train", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_train = to_size(k, v); }},
      {"n_valid", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_valid = to_size(k, v); }},
      {"n_cal_pairs",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_cal_pairs = to_size(k, v); }},
      {"n_test_pairs",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_test_pairs = to_size(k, v); }},
      {"l_max",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.l_max = static_cast<int>(to_integer(k, v));
       }},
      {"seeds",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.seeds.clear();
         for (const auto& item : split_list(v)) c.seeds.push_back(to_u64(k, item));
       }},
      {"out_dir", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
      {"threads",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.threads = static_cast<int>(to_integer(k, v));
       }},
      {"sim.steps",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sim.steps = static_cast<int>(to_integer(k, v));
       }},
      {"sim.base_latency",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.base_latency = to_double(k, v); }},
      {"sim.latency_noise_scale",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sim.latency_noise_scale = to_double(k, v);
       }},
      {"sim.ar_coefficient",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.ar_coefficient = to_double(k, v); }},
      {"sim.burst_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.burst_rate = to_double(k, v); }},
      {"sim.burst_magnitude",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.burst_magnitude = to_double(k, v); }},
      {"sim.burst_duration",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sim.burst_duration = static_cast<int>(to_integer(k, v));
       }},
      {"sim.arrival_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.arrival_rate = to_double(k, v); }},
      {"sim.arrival_noise",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.arrival_noise = to_double(k, v); }},
      {"sim.burst_arrivals",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.burst_arrivals = to_double(k, v); }},
      {"sim.service_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.service_rate = to_double(k, v); }},
      {"sim.rng_seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sim.rng_seed = to_u64(k, v); }},
      {"learner.num_predicates",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.num_predicates = static_cast<int>(to_integer(k, v));
       }},
      {"learner.num_temporal",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.num_temporal = static_cast<int>(to_integer(k, v));
       }},
      {"learner.temperature",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.learner.temperature = to_double(k, v); }},
      {"learner.mask_sharpness",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.mask_sharpness = to_double(k, v);
       }},
      {"learner.learning_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.learning_rate = to_double(k, v);
       }},
      {"learner.batch_size",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.batch_size = static_cast<int>(to_integer(k, v));
       }},
      {"learner.epochs",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.epochs = static_cast<int>(to_integer(k, v));
       }},
      {"learner.margin",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.learner.margin = to_double(k, v); }},
      {"learner.margin_weight",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.margin_weight = to_double(k, v);
       }},
      {"learner.reg_binarize",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.learner.reg_binarize = to_double(k, v); }},
      {"learner.reg_sparsity",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.learner.reg_sparsity = to_double(k, v); }},
      {"learner.binarize_ramp",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.learner.binarize_ramp = to_bool(k, v); }},
      {"learner.window_lr_scale",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.learner.window_lr_scale = to_double(k, v);
       }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Stll: return "stll";
    case Variant::Cstll: return "cstll";
    case Variant::StoppingOnly: return "stopping_only";
    case Variant::ComplexityStopping: return "complexity_stopping";
    case Variant::DiversityStopping: return "diversity_stopping";
    case Variant::Bonferroni: return "bonferroni";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected stll, cstll, stopping_only, complexity_stopping, diversity_stopping or "
                              "bonferroni)");
}

std::vector<Hyper> restricted_grid(Variant v, std::span<const Hyper> grid) {
  std::vector<Hyper> out;
  for (Hyper h : grid) {
    if (v == Variant::StoppingOnly || v == Variant::DiversityStopping) h.lambda1 = kInf;
    if (v == Variant::StoppingOnly || v == Variant::ComplexityStopping) h.lambda2 = 0.0;
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
  }
  return out;
}

void ExperimentConfig::apply_desk_scale() {
  n_train = 500;
  n_valid = 200;
  n_cal_pairs = 40;
  n_test_pairs = 20;
}

std::vector<Hyper> ExperimentConfig::grid() const {
  std::vector<Hyper> out;
  for (double l1 : grid_lambda1) {
    for (double l2 : grid_lambda2) {
      for (double l3 : grid_lambda3) out.push_back(Hyper{l1, l2, l3});
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("config key 'methods' is empty");
  if (epsilons.empty()) throw std::invalid_argument("config key 'epsilons' is empty");
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("config key 'epsilons': values must lie in (0,1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config key 'delta' must lie in (0,1)");
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("config key 'phi' must lie in [0,1]");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw std::invalid_argument("config key 'split_fraction' must lie in (0,1)");
  }
  try {
    validate_grid(grid());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config keys 'grid_lambda*': ") + e.what());
  }
  if (n_train < 1) throw std::invalid_argument("config key 'n_train' must be >= 1");
  if (n_valid < 1) throw std::invalid_argument("config key 'n_valid' must be >= 1");
  if (n_cal_pairs < 2) throw std::invalid_argument("config key 'n_cal_pairs' must be >= 2");
  if (n_test_pairs < 1) throw std::invalid_argument("config key 'n_test_pairs' must be >= 1");
  if (l_max < 1) throw std::invalid_argument("config key 'l_max' must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config key 'seeds' is empty");
  if (threads < 0) throw std::invalid_argument("config key 'threads' must be >= 0");
  sim.validate();
  learner.validate();
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(base, key, value);
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  auto num = [](double v) { return format_double(v); };
  out << "methods = " << join(c.methods, [](Variant v) { return std::string(to_string(v)); }) << '\n';
  out << "epsilons = " << join(c.epsilons, num) << '\n';
  out << "delta = " << num(c.delta) << '\n';
  out << "phi = " << num(c.phi) << '\n';
  out << "split_fraction = " << num(c.split_fraction) << '\n';
  out << "grid_lambda1 = " << join(c.grid_lambda1, num) << '\n';
  out << "grid_lambda2 = " << join(c.grid_lambda2, num) << '\n';
  out << "grid_lambda3 = " << join(c.grid_lambda3, num) << '\n';
  out << "n_train = " << c.n_train << '\n';
  out << "n_valid = " << c.n_valid << '\n';
  out << "n_cal_pairs = " << c.n_cal_pairs << '\n';
  out << "n_test_pairs = " << c.n_test_pairs << '\n';
  out << "l_max = " << c.l_max << '\n';
  out << "seeds = " << join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "threads = " << c.threads << '\n';
  out << "sim.steps = " << c.sim.steps << '\n';
  out << "sim.base_latency = " << num(c.sim.base_latency) << '\n';
  out << "sim.latency_noise_scale = " << num(c.sim.latency_noise_scale) << '\n';
  out << "sim.ar_coefficient = " << num(c.sim.ar_coefficient) << '\n';
  out << "sim.burst_rate = " << num(c.sim.burst_rate) << '\n';
  out << "sim.burst_magnitude = " << num(c.sim.burst_magnitude) << '\n';
  out << "sim.burst_duration = " << c.sim.burst_duration << '\n';
  out << "sim.arrival_rate = " << num(c.sim.arrival_rate) << '\n';
  out << "sim.arrival_noise = " << num(c.sim.arrival_noise) << '\n';
  out << "sim.burst_arrivals = " << num(c.sim.burst_arrivals) << '\n';
  out << "sim.service_rate = " << num(c.sim.service_rate) << '\n';
  out << "sim.rng_seed = " << c.sim.rng_seed << '\n';
  out << "learner.num_predicates = " << c.learner.num_predicates << '\n';
  out << "learner.num_temporal = " << c.learner.num_temporal << '\n';
  out << "learner.temperature = " << num(c.learner.temperature) << '\n';
  out << "learner.mask_sharpness = " << num(c.learner.mask_sharpness) << '\n';
  out << "learner.learning_rate = " << num(c.learner.learning_rate) << '\n';
  out << "learner.batch_size = " << c.learner.batch_size << '\n';
  out << "learner.epochs = " << c.learner.epochs << '\n';
  out << "learner.margin = " << num(c.learner.margin) << '\n';
  out << "learner.margin_weight = " << num(c.learner.margin_weight) << '\n';
  out << "learner.reg_binarize = " << num(c.learner.reg_binarize) << '\n';
  out << "learner.reg_sparsity = " << num(c.learner.reg_sparsity) << '\n';
  out << "learner.binarize_ramp = " << (c.learner.binarize_ramp ? "true" : "false") << '\n';
  out << "learner.window_lr_scale = " << num(c.learner.window_lr_scale) << '\n';
}

}  // namespace confstl::experiment
