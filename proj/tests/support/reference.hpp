#pragma once

// Independent reference implementations used as test oracles.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "confstl/formula.hpp"
#include "confstl/trace.hpp"

namespace ref {

struct EmptyWindow : std::runtime_error {
  EmptyWindow() : std::runtime_error("empty window") {}
};

// Straight recursion over the definition, one time point at a time.
inline double robustness(const confstl::Formula& f, const confstl::Trace& x, std::size_t t) {
  using confstl::NodeKind;
  const std::size_t last = x.steps() - 1;
  switch (f.kind()) {
    case NodeKind::Atom: {
      double s = 0.0;
      for (std::size_t c = 0; c < x.channels(); ++c) s += f.coefficients()[c] * x.at(c, t);
      return s - f.offset();
    }
    case NodeKind::And: {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& g : f.children()) v = std::min(v, robustness(g, x, t));
      return v;
    }
    case NodeKind::Or: {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto& g : f.children()) v = std::max(v, robustness(g, x, t));
      return v;
    }
    case NodeKind::Eventually:
    case NodeKind::Always: {
      const std::size_t lo = t + static_cast<std::size_t>(f.window().lo);
      std::size_t hi = f.window().hi ? t + static_cast<std::size_t>(*f.window().hi) : last;
      hi = std::min(hi, last);
      if (lo > hi) throw EmptyWindow();
      const bool ev = f.kind() == NodeKind::Eventually;
      double v = ev ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (std::size_t s = lo; s <= hi; ++s) {
        const double r = robustness(f.child(), x, s);
        v = ev ? std::max(v, r) : std::min(v, r);
      }
      return v;
    }
  }
  return 0.0;
}

// Boolean satisfaction with atoms read as a.x > b.
inline bool satisfied(const confstl::Formula& f, const confstl::Trace& x, std::size_t t) {
  using confstl::NodeKind;
  const std::size_t last = x.steps() - 1;
  switch (f.kind()) {
    case NodeKind::Atom: {
      double s = 0.0;
      for (std::size_t c = 0; c < x.channels(); ++c) s += f.coefficients()[c] * x.at(c, t);
      return s > f.offset();
    }
    case NodeKind::And:
      return std::all_of(f.children().begin(), f.children().end(), [&](const auto& g) { return satisfied(g, x, t); });
    case NodeKind::Or:
      return std::any_of(f.children().begin(), f.children().end(), [&](const auto& g) { return satisfied(g, x, t); });
    case NodeKind::Eventually:
    case NodeKind::Always: {
      const std::size_t lo = t + static_cast<std::size_t>(f.window().lo);
      std::size_t hi = f.window().hi ? t + static_cast<std::size_t>(*f.window().hi) : last;
      hi = std::min(hi, last);
      if (lo > hi) throw EmptyWindow();
      for (std::size_t s = lo; s <= hi; ++s) {
        const bool v = satisfied(f.child(), x, s);
        if (f.kind() == NodeKind::Eventually && v) return true;
        if (f.kind() == NodeKind::Always && !v) return false;
      }
      return f.kind() == NodeKind::Always;
    }
  }
  return false;
}

// With `unbounded`, about one temporal node in six has an open upper bound.
inline confstl::Formula random_formula(std::mt19937_64& rng, std::size_t channels, int depth, int max_arity,
                                       int horizon, bool unbounded = true) {
  using confstl::Formula;
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 4 : 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int k = kind(rng);
  if (k == 0) {
    std::vector<double> a(channels);
    for (double& v : a) v = gauss(rng);
    return Formula::atom(a, gauss(rng));
  }
  if (k <= 2) {
    std::uniform_int_distribution<int> arity(2, max_arity);
    std::vector<Formula> kids;
    const int n = arity(rng);
    for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, channels, depth - 1, max_arity, horizon, unbounded));
    return k == 1 ? Formula::conjunction(kids) : Formula::disjunction(kids);
  }
  std::uniform_int_distribution<int> bound(0, horizon);
  int lo = bound(rng);
  int hi = bound(rng);
  if (lo > hi) std::swap(lo, hi);
  confstl::Interval w{lo, hi};
  if (unbounded && std::uniform_int_distribution<int>(0, 5)(rng) == 0) w.hi.reset();
  auto child = random_formula(rng, channels, depth - 1, max_arity, horizon, unbounded);
  return k == 3 ? Formula::eventually(w, child) : Formula::always(w, child);
}

inline confstl::Trace random_trace(std::mt19937_64& rng, std::shared_ptr<const confstl::ChannelNames> names,
                                   std::size_t steps, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  std::vector<double> v(names->size() * steps);
  for (double& x : v) x = gauss(rng);
  return confstl::Trace(std::move(names), steps, std::move(v));
}

}  // namespace ref
