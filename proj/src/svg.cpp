#include "lattice_tda/svg.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "lattice_tda/scores.hpp"

namespace ltda {

namespace {

constexpr double kWidth = 960;
constexpr double kHeight = 520;
constexpr double kMargin = 60;
constexpr double kPlot = 400;  // side of the diagram panel
constexpr double kHistLeft = 560;
constexpr double kHistWidth = 340;
constexpr double kHistHeight = 170;

constexpr const char* kColorH0 = "#1f77b4";
constexpr const char* kColorH1 = "#ff7f0e";

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void histogram_panel(std::string& svg, const DiagramHistogram& h, double top,
                     const char* color, const std::string& label) {
  const double bottom = top + kHistHeight;
  svg += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
      "fill=\"none\" stroke=\"#444\"/>\n",
      kHistLeft, top, kHistWidth, kHistHeight);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\">{}</text>\n",
      kHistLeft, top - 8, escape(label));
  const int max_count = h.counts.empty()
                            ? 0
                            : *std::max_element(h.counts.begin(), h.counts.end());
  const double bar_w = kHistWidth / static_cast<double>(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    if (h.counts[b] == 0) continue;
    const double bar_h = kHistHeight * h.counts[b] / max_count;
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
        "fill=\"{}\" fill-opacity=\"0.8\"><title>{}</title></rect>\n",
        kHistLeft + b * bar_w, bottom - bar_h, bar_w, bar_h, color,
        h.counts[b]);
  }
  const double hi = h.bin_edges.empty() ? 0.0 : h.bin_edges.back();
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\">0</text>\n"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
      "text-anchor=\"end\">{:.4g}</text>\n"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
      "text-anchor=\"end\">{}</text>\n",
      kHistLeft, bottom + 14, kHistLeft + kHistWidth, bottom + 14, hi,
      kHistLeft - 4, top + 10, max_count);
}

}  // namespace

std::string render_diagram_svg(const PersistenceDiagram& diagram,
                               const SvgOptions& options) {
  double top = diagram.threshold;
  for (const auto& p : diagram.h0) top = std::max(top, p.death);
  for (const auto& p : diagram.h1) top = std::max(top, p.death);
  top = top > 0.0 ? top * 1.05 : 1.0;

  const double x0 = kMargin;
  const double y0 = kMargin + kPlot;  // screen y of value 0
  auto sx = [&](double v) { return x0 + kPlot * v / top; };
  auto sy = [&](double v) { return y0 - kPlot * v / top; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\">\n",
      kWidth, kHeight, kWidth, kHeight);
  svg += fmt::format(
      "<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth,
      kHeight);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"28\" font-size=\"16\">{}</text>\n", x0,
      escape(options.title));

  // Axes, frame and diagonal.
  svg += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
      "fill=\"none\" stroke=\"#444\"/>\n",
      x0, kMargin, kPlot, kPlot);
  svg += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
      "stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
      sx(0), sy(0), sx(top), sy(top));
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" "
      "text-anchor=\"middle\">birth</text>\n"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 {:.2f} {:.2f})\">death</text>\n",
      x0 + kPlot / 2, y0 + 36, x0 - 36, kMargin + kPlot / 2, x0 - 36,
      kMargin + kPlot / 2);
  for (int t = 0; t <= 4; ++t) {
    const double v = top * t / 4.0;
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
        "text-anchor=\"middle\">{:.3g}</text>\n"
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
        "text-anchor=\"end\">{:.3g}</text>\n",
        sx(v), y0 + 16, v, x0 - 6, sy(v) + 4, v);
  }

  svg += fmt::format("<g fill=\"{}\" fill-opacity=\"0.7\">\n", kColorH0);
  for (const auto& p : diagram.h0) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\"/>\n",
                       sx(p.birth), sy(p.death));
  }
  svg += "</g>\n";
  svg += fmt::format("<g fill=\"{}\" fill-opacity=\"0.7\">\n", kColorH1);
  for (const auto& p : diagram.h1) {
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"7\" height=\"7\"/>\n",
        sx(p.birth) - 3.5, sy(p.death) - 3.5);
  }
  svg += "</g>\n";
  // Essential classes sit on the top edge.
  for (int k = 0; k < diagram.h0_infinite; ++k) {
    const double cx = sx(0);
    const double cy = kMargin;
    svg += fmt::format(
        "<polygon points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" "
        "fill=\"#d62728\"><title>infinite H0</title></polygon>\n",
        cx - 6, cy + 5, cx + 6, cy + 5, cx, cy - 6);
  }

  // Legend.
  const double ly = y0 + 52;
  svg += fmt::format(
      "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">H0 ({})</text>\n"
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"7\" height=\"7\" fill=\"{}\"/>"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">H1 ({})</text>\n"
      "<polygon points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" "
      "fill=\"#d62728\"/>"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">H0 infinite ({})</text>\n",
      x0 + 4, ly, kColorH0, x0 + 14, ly + 4, diagram.h0.size(), x0 + 100.5,
      ly - 3.5, kColorH1, x0 + 114, ly + 4, diagram.h1.size(), x0 + 194,
      ly + 5, x0 + 206, ly + 5, x0 + 200, ly - 6, x0 + 214, ly + 4,
      diagram.h0_infinite);

  const int bins = std::max(1, options.histogram_bins);
  histogram_panel(svg,
                  histogram(diagram, 0, HistogramStatistic::death, bins),
                  kMargin, kColorH0, "H0 deaths");
  histogram_panel(svg,
                  histogram(diagram, 1, HistogramStatistic::lifetime, bins),
                  kMargin + kHistHeight + 60, kColorH1, "H1 lifetimes");
  svg += "</svg>\n";
  return svg;
}

}  // namespace ltda
