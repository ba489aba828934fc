#include "confstl/robustness.hpp"

#include <algorithm>
#include <string>

#include "confstl/kernels.hpp"

namespace confstl {
namespace {

void signal_into(const Formula& f, const Trace& trace, std::size_t first, std::size_t last, std::vector<double>& out,
                 const kernels::KernelTable& k) {
  const std::size_t n = last - first + 1;
  out.resize(n);
  switch (f.kind()) {
    case NodeKind::Atom: {
      const auto coeffs = f.coefficients();
      if (coeffs.size() != trace.channels()) {
        throw EvaluationError("atom expects " + std::to_string(coeffs.size()) + " channels, trace has " +
                              std::to_string(trace.channels()));
      }
      k.affine(trace.data() + first, trace.steps(), trace.channels(), coeffs.data(), f.offset(), out.data(), n);
      return;
    }
    case NodeKind::And:
    case NodeKind::Or: {
      const auto kids = f.children();
      signal_into(kids[0], trace, first, last, out, k);
      std::vector<double> tmp;
      for (std::size_t i = 1; i < kids.size(); ++i) {
        signal_into(kids[i], trace, first, last, tmp, k);
        if (f.kind() == NodeKind::And) {
          k.accumulate_min(out.data(), tmp.data(), n);
        } else {
          k.accumulate_max(out.data(), tmp.data(), n);
        }
      }
      return;
    }
    case NodeKind::Eventually:
    case NodeKind::Always: {
      const std::size_t end = trace.steps() - 1;
      const auto& w = f.window();
      const std::size_t lo = static_cast<std::size_t>(w.lo);
      if (last + lo > end) {
        throw EvaluationError("empty temporal window: t=" + std::to_string(last) + " + " + std::to_string(lo) +
                              " exceeds trace end " + std::to_string(end));
      }
      const std::size_t hi = w.hi ? static_cast<std::size_t>(*w.hi) : end;
      const std::size_t child_first = first + lo;
      const std::size_t child_last = std::min(last + hi, end);
      std::vector<double> child;
      signal_into(f.child(), trace, child_first, child_last, child, k);
      const bool is_min = f.kind() == NodeKind::Always;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = first + i;
        const std::size_t a = t + lo - child_first;
        const std::size_t b = std::min(t + hi, end) - child_first;
        out[i] = is_min ? k.reduce_min(child.data() + a, b - a + 1) : k.reduce_max(child.data() + a, b - a + 1);
      }
      return;
    }
  }
}

}  // namespace

std::vector<double> robustness_signal(const Formula& f, const Trace& trace, std::size_t first, std::size_t last) {
  if (last < first || last >= trace.steps()) {
    throw EvaluationError("evaluation range [" + std::to_string(first) + "," + std::to_string(last) +
                          "] outside trace of length " + std::to_string(trace.steps()));
  }
  std::vector<double> out;
  signal_into(f, trace, first, last, out, kernels::active());
  return out;
}

double eval_robustness(const Formula& f, const Trace& trace, std::size_t t) {
  return robustness_signal(f, trace, t, t).front();
}

Label classify(const Formula& f, const Trace& trace) {
  return eval_robustness(f, trace, 0) > 0.0 ? Label::Positive : Label::Negative;
}

std::vector<double> robustness_at_origin(const Formula& f, const LabeledDataset& data) {
  std::vector<double> r(data.size());
  const auto& k = kernels::active();
  std::vector<double> buf;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& tr = data[i].trace;
    signal_into(f, tr, 0, 0, buf, k);
    r[i] = buf.front();
  }
  return r;
}

}  // namespace confstl
