#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "confstl/experiment.hpp"
#include "confstl/numfmt.hpp"

namespace confstl::experiment {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* color_of(Variant v) {
  static constexpr std::array<const char*, 6> colors{"#7f7f7f", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
  return colors[static_cast<std::size_t>(v)];
}

struct Point {
  double x, y, se;
};

void plot(std::ostream& out, const std::string& title, const std::string& ylabel,
          const std::map<Variant, std::vector<Point>>& series, bool epsilon_line) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& [v, pts] : series) {
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y - p.se);
      ymax = std::max(ymax, p.y + p.se);
    }
  }
  if (epsilon_line && xmin <= xmax) {
    ymin = std::min({ymin, xmin, 0.0});
    ymax = std::max(ymax, xmax);
  }
  if (!(xmin <= xmax)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (xmax - xmin < 1e-12) xmin -= 0.05, xmax += 0.05;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };
  auto f = [](double v) { return format_fixed(v, 2); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = ymin + (ymax - ymin) * i / 5.0;
    out << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << f(sy(y)) << "\" y2=\"" << f(sy(y))
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << f(sy(y) + 4) << "\" text-anchor=\"end\">" << format_fixed(y, 3)
        << "</text>\n";
  }
  std::vector<double> xs;
  for (const auto& [v, pts] : series) {
    for (const auto& p : pts) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) {
    out << "<line x1=\"" << f(sx(x)) << "\" x2=\"" << f(sx(x)) << "\" y1=\"" << kTop + ph << "\" y2=\"" << kTop + ph + 4
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << f(sx(x)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << format_fixed(x, 2)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">epsilon</text>\n";
  out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
      << "</text>\n";
  if (epsilon_line) {
    out << "<line x1=\"" << f(sx(xmin)) << "\" y1=\"" << f(sy(xmin)) << "\" x2=\"" << f(sx(xmax)) << "\" y2=\""
        << f(sy(xmax)) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
  }
  int slot = 0;
  for (const auto& [v, pts] : series) {
    const char* c = color_of(v);
    if (pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : pts) out << f(sx(p.x)) << ',' << f(sy(p.y)) << ' ';
      out << "\"/>\n";
    }
    for (const auto& p : pts) {
      out << "<line x1=\"" << f(sx(p.x)) << "\" x2=\"" << f(sx(p.x)) << "\" y1=\"" << f(sy(p.y - p.se)) << "\" y2=\""
          << f(sy(p.y + p.se)) << "\" stroke=\"" << c << "\"/>\n";
      out << "<circle cx=\"" << f(sx(p.x)) << "\" cy=\"" << f(sy(p.y)) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    const double ly = kTop + 10 + 20 * slot++;
    out << "<line x1=\"" << kWidth - kRight + 15 << "\" x2=\"" << kWidth - kRight + 40 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly + 4 << "\">" << to_string(v) << "</text>\n";
  }
  if (epsilon_line) {
    const double ly = kTop + 10 + 20 * slot;
    out << "<line x1=\"" << kWidth - kRight + 15 << "\" x2=\"" << kWidth - kRight + 40 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly + 4 << "\">y = epsilon</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_plots(const std::filesystem::path& dir, std::span<const SummaryRow> rows) {
  struct Panel {
    const char* file;
    const char* title;
    const char* ylabel;
    Stat SummaryRow::*stat;
  };
  const std::array<Panel, 4> panels{{{"risk.svg", "Test risk", "average risk", &SummaryRow::risk},
                                     {"set_size.svg", "Set size", "average set size", &SummaryRow::set_size},
                                     {"complexity.svg", "Complexity", "average complexity", &SummaryRow::complexity},
                                     {"diversity.svg", "Diversity", "average diversity", &SummaryRow::diversity}}};
  std::filesystem::create_directories(dir);
  for (const auto& panel : panels) {
    std::map<Variant, std::vector<Point>> series;
    for (const auto& r : rows) {
      const Stat& s = r.*panel.stat;
      if (s.n > 0) series[r.method].push_back({r.epsilon, s.mean, s.se});
    }
    const bool risk = panel.stat == &SummaryRow::risk;
    write_file_atomic(dir / panel.file, [&](std::ostream& out) { plot(out, panel.title, panel.ylabel, series, risk); });
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace confstl::experiment
