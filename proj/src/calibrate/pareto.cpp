#include <algorithm>
#include <tuple>

#include "confstl/calibrate.hpp"

namespace confstl {

std::vector<Hyper> pareto_frontier(std::span<const ScoredCandidate> points) {
  std::vector<const ScoredCandidate*> front;
  for (const auto& q : points) {
    const bool dominated = std::any_of(points.begin(), points.end(), [&](const ScoredCandidate& p) {
      return p.risk <= q.risk && p.size <= q.size && (p.risk < q.risk || p.size < q.size);
    });
    if (!dominated) front.push_back(&q);
  }
  std::sort(front.begin(), front.end(), [](const ScoredCandidate* a, const ScoredCandidate* b) {
    return std::tie(a->p_value, a->risk, a->lambda) < std::tie(b->p_value, b->risk, b->lambda);
  });
  std::vector<Hyper> out;
  out.reserve(front.size());
  for (const auto* p : front) out.push_back(p->lambda);
  return out;
}

std::size_t fixed_sequence_prefix(std::span<const double> p_values, double delta) {
  std::size_t n = 0;
  while (n < p_values.size() && p_values[n] < delta) ++n;
  return n;
}

}  // namespace confstl
