#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "confstl/trace.hpp"

namespace confstl {

enum class NodeKind { Atom, And, Or, Eventually, Always };

/// Integer time window [lo, hi] relative to the evaluation time. An absent
/// upper bound means "until the end of the trace".
struct Interval {
  int lo = 0;
  std::optional<int> hi;

  bool operator==(const Interval&) const = default;
};

/// Immutable STL syntax tree. Atoms are a.x > b; "a.x < b" is represented
/// as (-a).x > -b.
class Formula {
 public:
  static Formula atom(std::vector<double> coeffs, double offset);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula eventually(Interval window, Formula child);
  static Formula always(Interval window, Formula child);

  NodeKind kind() const noexcept { return kind_; }
  bool is_temporal() const noexcept { return kind_ == NodeKind::Eventually || kind_ == NodeKind::Always; }
  bool is_boolean() const noexcept { return kind_ == NodeKind::And || kind_ == NodeKind::Or; }

  std::span<const double> coefficients() const noexcept { return coeffs_; }
  double offset() const noexcept { return offset_; }
  const Interval& window() const noexcept { return window_; }
  std::span<const Formula> children() const noexcept { return children_; }
  const Formula& child() const { return children_.at(0); }

  /// Channel count expected by every atom (0 if inconsistent atoms are mixed).
  std::size_t channels() const noexcept;

  std::size_t temporal_count() const noexcept;
  std::size_t node_count() const noexcept;
  std::size_t depth() const noexcept;

  bool operator==(const Formula& other) const;

 private:
  Formula() = default;

  NodeKind kind_ = NodeKind::Atom;
  std::vector<double> coeffs_;
  double offset_ = 0.0;
  Interval window_{};
  std::vector<Formula> children_;
};


class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Grammar:
//   formula := conj ("|" conj)*
//   conj    := term ("&" term)*
//   term    := ("G" | "F") "[" int "," (int | "inf") "]" "(" formula ")"
//            | "(" formula ")" | atom
//   atom    := linear (">" | "<") number
//   linear  := ["-"] mono (("+" | "-") mono)*
//   mono    := number ["*"] channel | channel
// "&" binds tighter than "|"; chains of the same operator flatten.
Formula parse_formula(std::string_view text, const ChannelNames& channels);

/// Canonical text: Boolean children sorted, shortest round-trip numerals.
std::string format_formula(const Formula& f, const ChannelNames& channels);

/// Same tree with And/Or children reordered as format_formula prints them, so
/// that parse_formula(format_formula(f)) == canonicalize(f).
Formula canonicalize(const Formula& f, const ChannelNames& channels);

}  // namespace confstl
