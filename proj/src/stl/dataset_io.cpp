#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "confstl/numfmt.hpp"
#include "confstl/trace.hpp"

namespace confstl {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("dataset csv line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_dataset_csv(std::ostream& out, const LabeledDataset& data) {
  out << "trace_id,label,step";
  for (const auto& n : data.channel_names()) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i];
    for (std::size_t t = 0; t < s.trace.steps(); ++t) {
      out << i << ',' << to_int(s.label) << ',' << t;
      for (std::size_t c = 0; c < s.trace.channels(); ++c) out << ',' << format_double(s.trace.at(c, t));
      out << '\n';
    }
  }
}

LabeledDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset csv: missing header");
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "trace_id" || header[1] != "label" || header[2] != "step") {
    throw std::runtime_error("dataset csv: header must be trace_id,label,step,<channels...>");
  }
  auto names = std::make_shared<const ChannelNames>(header.begin() + 3, header.end());
  const std::size_t d = names->size();

  struct Pending {
    Label label;
    std::vector<std::vector<double>> rows;  // per step, d values
  };
  // Traces keep first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, Pending> pending;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != d + 3) fail(line_no, "expected " + std::to_string(d + 3) + " fields");
    const auto label_v = parse_double(f[1]);
    const auto step_v = parse_double(f[2]);
    if (!label_v || !step_v) fail(line_no, "malformed label or step");
    Label label{};
    try {
      label = label_from_int(static_cast<long>(*label_v));
    } catch (const std::invalid_argument& e) {
      fail(line_no, e.what());
    }
    if (*label_v != static_cast<double>(static_cast<long>(*label_v))) fail(line_no, "label must be an integer");
    auto [it, inserted] = pending.try_emplace(f[0], Pending{label, {}});
    if (inserted) order.push_back(f[0]);
    auto& p = it->second;
    if (p.label != label) fail(line_no, "label changes within trace '" + f[0] + "'");
    if (*step_v != static_cast<double>(p.rows.size())) fail(line_no, "steps must be consecutive from 0");
    std::vector<double> row(d);
    for (std::size_t c = 0; c < d; ++c) {
      const auto v = parse_double(f[3 + c]);
      if (!v) fail(line_no, "malformed value '" + f[3 + c] + "'");
      row[c] = *v;
    }
    p.rows.push_back(std::move(row));
  }
  if (order.empty()) throw std::runtime_error("dataset csv: no rows");

  std::vector<Sample> samples;
  samples.reserve(order.size());
  for (const auto& id : order) {
    const auto& p = pending.at(id);
    const std::size_t steps = p.rows.size();
    std::vector<double> values(d * steps);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t c = 0; c < d; ++c) values[c * steps + t] = p.rows[t][c];
    }
    samples.push_back(Sample{Trace(names, steps, std::move(values)), p.label});
  }
  return LabeledDataset(std::move(samples));
}

void save_dataset(const std::string& path, const LabeledDataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_dataset_csv(out, data);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_dataset_csv(in);
}

}  // namespace confstl
