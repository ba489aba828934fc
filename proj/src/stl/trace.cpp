#include "confstl/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace confstl {

Trace::Trace(std::shared_ptr<const ChannelNames> names, std::size_t steps, std::vector<double> values)
    : names_(std::move(names)), steps_(steps), values_(std::move(values)) {
  if (!names_ || names_->empty()) throw std::invalid_argument("trace needs at least one channel");
  if (steps_ == 0) throw std::invalid_argument("trace needs at least one time step");
  std::unordered_set<std::string> seen;
  for (const auto& n : *names_) {
    if (n.empty()) throw std::invalid_argument("empty channel name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate channel name '" + n + "'");
  }
  if (values_.size() != names_->size() * steps_) {
    throw std::invalid_argument("trace value count does not match channels x steps");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("trace values must be finite");
  }
}

std::size_t Trace::channel_index(const std::string& name) const {
  const auto it = std::find(names_->begin(), names_->end(), name);
  if (it == names_->end()) throw std::invalid_argument("unknown channel '" + name + "'");
  return static_cast<std::size_t>(it - names_->begin());
}

Label label_from_int(long v) {
  if (v == 1) return Label::Positive;
  if (v == -1) return Label::Negative;
  throw std::invalid_argument("label must be +1 or -1, got " + std::to_string(v));
}

LabeledDataset::LabeledDataset(std::vector<Sample> items) : items_(std::move(items)) {
  if (items_.empty()) throw std::invalid_argument("labeled dataset must be non-empty");
  const auto& first = items_.front().trace;
  labels_.reserve(items_.size());
  for (const auto& s : items_) {
    const auto& tr = s.trace;
    if (tr.steps() != first.steps() || tr.channels() != first.channels() ||
        (tr.shared_names() != first.shared_names() && tr.channel_names() != first.channel_names())) {
      throw std::invalid_argument("dataset traces must share channels and length");
    }
    labels_.push_back(to_int(s.label));
  }
}

std::size_t LabeledDataset::count(Label y) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), to_int(y)));
}

}  // namespace confstl
