#include "rwgc/svg.hpp"

#include <algorithm>
#include <cmath>

namespace rwgc {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double margin = 50.0;

double px(double unit_x) { return margin + unit_x * (width - 2 * margin); }
double py(double unit_y) { return height - margin - unit_y * (height - 2 * margin); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string svg_open(const std::string& title, const std::string& x_label,
                     const std::string& y_label) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
       "\" height=\"" + num(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
       title + "</text>\n";
  s += "<line x1=\"" + num(margin) + "\" y1=\"" + num(height - margin) + "\" x2=\"" +
       num(width - margin) + "\" y2=\"" + num(height - margin) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(margin) + "\" y1=\"" + num(margin) + "\" x2=\"" + num(margin) +
       "\" y2=\"" + num(height - margin) + "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 12) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + x_label + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(height / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
       num(height / 2) + ")\">" + y_label + "</text>\n";
  return s;
}

}  // namespace

std::string histogram_svg(const DistributionArtifacts& art, const std::string& title) {
  long long max_count = 1;
  for (const auto& b : art.histogram) max_count = std::max(max_count, b.count);
  const double log_max = std::log10(static_cast<double>(max_count) + 1.0);

  std::string s = svg_open(title, "normalised mean performance", "log10(1 + count)");
  const double bar_w = 1.0 / static_cast<double>(art.histogram.size());
  for (const auto& b : art.histogram) {
    if (b.count == 0) continue;
    const double h = std::log10(static_cast<double>(b.count) + 1.0) / log_max;
    const double x0 = px(b.lo);
    const double x1 = px(b.lo + bar_w);
    const double y0 = py(h);
    s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) +
         "\" height=\"" + num(py(0) - y0) + "\" fill=\"#4878cf\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string performance_curve_svg(const DistributionArtifacts& art,
                                  const std::string& title) {
  std::string s = svg_open(title, "rank", "normalised performance");
  const double n = static_cast<double>(art.curve.size());

  // Scatter first so the curve draws on top; thin the points for file size.
  const std::size_t max_points = 6000;
  const std::size_t stride = std::max<std::size_t>(1, art.scatter.size() / max_points);
  for (std::size_t i = 0; i < art.scatter.size(); i += stride) {
    const auto& p = art.scatter[i];
    s += "<circle cx=\"" + num(px((p.rank - 0.5) / n)) + "\" cy=\"" +
         num(py(p.return_scaled)) + "\" r=\"1\" fill=\"#d65f5f\" fill-opacity=\"0.35\"/>\n";
  }

  std::string path;
  for (std::size_t i = 0; i < art.curve.size(); ++i) {
    const auto& c = art.curve[i];
    path += (i == 0 ? "M" : "L");
    path += num(px((c.rank - 0.5) / n)) + " " + num(py(c.mean_scaled)) + " ";
  }
  s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  s += "</svg>\n";
  return s;
}

std::string variance_cloud_svg(const DistributionArtifacts& art, const std::string& title) {
  double max_std = 0.0;
  for (const auto& c : art.cloud) max_std = std::max(max_std, c.stddev_scaled);
  if (max_std == 0.0) max_std = 1.0;

  std::string s = svg_open(title, "normalised mean performance",
                           "normalised stddev of performance");
  for (const auto& c : art.cloud) {
    s += "<circle cx=\"" + num(px(c.mean_scaled)) + "\" cy=\"" +
         num(py(c.stddev_scaled / max_std)) + "\" r=\"1.5\" fill=\"#4878cf\" fill-opacity=\"0.45\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rwgc
