#include "confstl/formula.hpp"

#include <algorithm>
#include <cmath>

#include "confstl/numfmt.hpp"

namespace confstl {

Formula Formula::atom(std::vector<double> coeffs, double offset) {
  if (coeffs.empty()) throw std::invalid_argument("atom needs at least one coefficient");
  if (!std::isfinite(offset) ||
      !std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("atom coefficients must be finite");
  }
  if (std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("atom needs a nonzero coefficient");
  }
  Formula f;
  f.kind_ = NodeKind::Atom;
  f.coeffs_ = std::move(coeffs);
  f.offset_ = offset;
  return f;
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw std::invalid_argument("conjunction needs at least two children");
  Formula f;
  f.kind_ = NodeKind::And;
  f.children_ = std::move(children);
  return f;
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw std::invalid_argument("disjunction needs at least two children");
  Formula f;
  f.kind_ = NodeKind::Or;
  f.children_ = std::move(children);
  return f;
}

namespace {

void check_window(const Interval& w) {
  if (w.lo < 0) throw std::invalid_argument("interval lower bound must be >= 0");
  if (w.hi && *w.hi < w.lo) {
    throw std::invalid_argument("malformed interval [" + std::to_string(w.lo) + "," + std::to_string(*w.hi) + "]");
  }
}

}  // namespace

Formula Formula::eventually(Interval window, Formula child) {
  check_window(window);
  Formula f;
  f.kind_ = NodeKind::Eventually;
  f.window_ = window;
  f.children_.push_back(std::move(child));
  return f;
}

Formula Formula::always(Interval window, Formula child) {
  check_window(window);
  Formula f;
  f.kind_ = NodeKind::Always;
  f.window_ = window;
  f.children_.push_back(std::move(child));
  return f;
}

std::size_t Formula::channels() const noexcept {
  if (kind_ == NodeKind::Atom) return coeffs_.size();
  std::size_t d = children_.front().channels();
  for (const auto& c : children_) {
    if (c.channels() != d) return 0;
  }
  return d;
}

std::size_t Formula::temporal_count() const noexcept {
  std::size_t n = is_temporal() ? 1 : 0;
  for (const auto& c : children_) n += c.temporal_count();
  return n;
}

std::size_t Formula::node_count() const noexcept {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.node_count();
  return n;
}

std::size_t Formula::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& c : children_) d = std::max(d, c.depth());
  return d + 1;
}

bool Formula::operator==(const Formula& other) const {
  return kind_ == other.kind_ && coeffs_ == other.coeffs_ && offset_ == other.offset_ &&
         window_ == other.window_ && children_ == other.children_;
}

namespace {

std::string format_atom(const Formula& f, const ChannelNames& channels) {
  const auto coeffs = f.coefficients();
  if (coeffs.size() != channels.size()) {
    throw std::invalid_argument("atom has " + std::to_string(coeffs.size()) + " coefficients but " +
                                std::to_string(channels.size()) + " channels are named");
  }
  // Print with "<" when the leading nonzero coefficient is negative.
  double sign = 1.0;
  for (double c : coeffs) {
    if (c != 0.0) {
      sign = c < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  std::string s;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double c = sign * coeffs[i];
    if (c == 0.0) continue;
    const double mag = std::fabs(c);
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (mag != 1.0) s += format_double(mag) + "*";
    s += channels[i];
    first = false;
  }
  s += sign > 0 ? " > " : " < ";
  s += format_double(sign * f.offset());
  return s;
}

std::string format_node(const Formula& f, const ChannelNames& channels) {
  switch (f.kind()) {
    case NodeKind::Atom: return format_atom(f, channels);
    case NodeKind::And:
    case NodeKind::Or: {
      std::vector<std::string> parts;
      for (const auto& c : f.children()) {
        std::string p = format_node(c, channels);
        if (c.is_boolean()) p = "(" + p + ")";
        parts.push_back(std::move(p));
      }
      std::sort(parts.begin(), parts.end());
      const char* sep = f.kind() == NodeKind::And ? " & " : " | ";
      std::string s = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) s += sep + parts[i];
      return s;
    }
    case NodeKind::Eventually:
    case NodeKind::Always: {
      const auto& w = f.window();
      std::string s = f.kind() == NodeKind::Always ? "G[" : "F[";
      s += std::to_string(w.lo) + "," + (w.hi ? std::to_string(*w.hi) : std::string("inf")) + "](";
      return s + format_node(f.child(), channels) + ")";
    }
  }
  return {};
}

}  // namespace

std::string format_formula(const Formula& f, const ChannelNames& channels) { return format_node(f, channels); }

Formula canonicalize(const Formula& f, const ChannelNames& channels) {
  switch (f.kind()) {
    case NodeKind::Atom: return f;
    case NodeKind::And:
    case NodeKind::Or: {
      std::vector<std::pair<std::string, Formula>> keyed;
      for (const auto& c : f.children()) {
        Formula cc = canonicalize(c, channels);
        std::string key = format_node(cc, channels);
        if (cc.is_boolean()) key = "(" + key + ")";
        keyed.emplace_back(std::move(key), std::move(cc));
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<Formula> kids;
      for (auto& entry : keyed) kids.push_back(std::move(entry.second));
      return f.kind() == NodeKind::And ? Formula::conjunction(std::move(kids))
                                       : Formula::disjunction(std::move(kids));
    }
    case NodeKind::Eventually: return Formula::eventually(f.window(), canonicalize(f.child(), channels));
    case NodeKind::Always: return Formula::always(f.window(), canonicalize(f.child(), channels));
  }
  return f;
}

}  // namespace confstl
