#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "confstl/numfmt.hpp"
#include "confstl/setgen.hpp"

namespace confstl {

void write_formula_set_json(std::ostream& out, const FormulaSet& set, const ChannelNames& channels) {
  nlohmann::ordered_json doc;
  doc["formulas"] = nlohmann::ordered_json::array();
  for (const auto& m : set.accepted) {
    nlohmann::ordered_json item;
    item["formula"] = format_formula(m.formula, channels);
    item["complexity"] = m.complexity;
    item["quality"] = m.quality;
    item["accuracy"] = m.accuracy ? nlohmann::ordered_json(*m.accuracy) : nlohmann::ordered_json(nullptr);
    item["seed"] = m.seed;
    item["iteration"] = m.iteration;
    doc["formulas"].push_back(std::move(item));
  }
  out << doc.dump(2) << '\n';
}

std::vector<AcceptedFormula> read_formula_set_json(std::istream& in, const ChannelNames& channels) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("formula set: ") + e.what());
  }
  if (!doc.contains("formulas") || !doc["formulas"].is_array()) {
    throw std::runtime_error("formula set: missing 'formulas' array");
  }
  std::vector<AcceptedFormula> out;
  for (const auto& item : doc["formulas"]) {
    try {
      AcceptedFormula m{parse_formula(item.at("formula").get<std::string>(), channels),
                        item.at("complexity").get<double>(), item.at("quality").get<double>(), std::nullopt,
                        item.at("seed").get<std::uint64_t>(), item.at("iteration").get<int>()};
      if (item.contains("accuracy") && !item["accuracy"].is_null()) m.accuracy = item["accuracy"].get<double>();
      out.push_back(std::move(m));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("formula set entry: ") + e.what());
    }
  }
  return out;
}

void write_generation_log_csv(std::ostream& out, const FormulaSet& set) {
  out << "iteration,accepted,reason,H,min_D,F\n";
  for (const auto& r : set.log) {
    out << r.iteration << ',' << (r.accepted ? 1 : 0) << ',' << to_string(r.reason) << ',' << format_double(r.complexity)
        << ',' << (r.min_distance ? format_double(*r.min_distance) : std::string()) << ','
        << format_double(r.set_quality) << '\n';
  }
}

}  // namespace confstl
