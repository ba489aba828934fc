#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace confstl {

using ChannelNames = std::vector<std::string>;

/// A d x T matrix of KPI values over discrete time. Storage is channel-major
/// so each channel is a contiguous span of T values.
class Trace {
 public:
  /// Throws std::invalid_argument unless names are non-empty and distinct,
  /// steps >= 1, values.size() == names.size() * steps and all values are finite.
  Trace(std::shared_ptr<const ChannelNames> names, std::size_t steps, std::vector<double> values);

  std::size_t channels() const noexcept { return names_->size(); }
  std::size_t steps() const noexcept { return steps_; }

  std::span<const double> channel(std::size_t c) const noexcept {
    return {values_.data() + c * steps_, steps_};
  }
  double at(std::size_t c, std::size_t t) const noexcept { return values_[c * steps_ + t]; }

  /// Channel-major raw storage, stride steps().
  const double* data() const noexcept { return values_.data(); }

  const ChannelNames& channel_names() const noexcept { return *names_; }
  const std::shared_ptr<const ChannelNames>& shared_names() const noexcept { return names_; }

  /// Index of a channel by name; throws std::invalid_argument if absent.
  std::size_t channel_index(const std::string& name) const;

 private:
  std::shared_ptr<const ChannelNames> names_;
  std::size_t steps_;
  std::vector<double> values_;
};

enum class Label : int { Negative = -1, Positive = 1 };

inline int to_int(Label y) noexcept { return static_cast<int>(y); }

/// Throws std::invalid_argument for anything other than +1 / -1.
Label label_from_int(long v);

struct Sample {
  Trace trace;
  Label label;
};

/// Non-empty list of labeled traces sharing channels and length.
class LabeledDataset {
 public:
  explicit LabeledDataset(std::vector<Sample> items);

  std::size_t size() const noexcept { return items_.size(); }
  const Sample& operator[](std::size_t i) const noexcept { return items_[i]; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  std::size_t channels() const noexcept { return items_.front().trace.channels(); }
  std::size_t steps() const noexcept { return items_.front().trace.steps(); }
  const ChannelNames& channel_names() const noexcept { return items_.front().trace.channel_names(); }

  std::size_t count(Label y) const noexcept;
  bool has_both_labels() const noexcept { return count(Label::Positive) > 0 && count(Label::Negative) > 0; }

  /// Labels as +1 / -1 integers, in dataset order.
  const std::vector<int>& label_values() const noexcept { return labels_; }

 private:
  std::vector<Sample> items_;
  std::vector<int> labels_;
};

// CSV format: header "trace_id,label,step,<channel_1>,...,<channel_d>", one row
// per (trace, step), steps 0..T-1 in order, label constant within a trace_id.
void write_dataset_csv(std::ostream& out, const LabeledDataset& data);
LabeledDataset read_dataset_csv(std::istream& in);

void save_dataset(const std::string& path, const LabeledDataset& data);
LabeledDataset load_dataset(const std::string& path);

}  // namespace confstl
