#include "chf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace chf {

namespace {

constexpr int kW = 640, kH = 640, kMargin = 40;

struct Mapper {
  BBox box;
  double scale;
  double ox, oy;

  explicit Mapper(const BBox& b) : box(b) {
    double sx = (kW - 2 * kMargin) / std::max(b.width(), 1e-12);
    double sy = (kH - 2 * kMargin) / std::max(b.height(), 1e-12);
    scale = std::min(sx, sy);
    ox = kMargin - b.xmin * scale;
    oy = kH - kMargin + b.ymin * scale;  // flip y
  }
  double px(double x) const { return ox + x * scale; }
  double py(double y) const { return oy - y * scale; }
};

/// blue (low) to red (high) through white
std::string color(double u) {
  u = std::clamp(u, 0.0, 1.0);
  int r, g, b;
  if (u < 0.5) {
    double v = 2.0 * u;
    r = static_cast<int>(255 * v);
    g = static_cast<int>(255 * v);
    b = 255;
  } else {
    double v = 2.0 * (u - 0.5);
    r = 255;
    g = static_cast<int>(255 * (1.0 - v));
    b = static_cast<int>(255 * (1.0 - v));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::ofstream open_svg(const std::string& path, const std::string& comment) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open output file " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
     << "\" height=\"" << kH << "\">\n";
  if (!comment.empty()) os << "<!-- " << comment << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os;
}

}  // namespace

void write_heatmap_svg(const std::string& path, const Domain& domain,
                       const std::vector<HeatmapCell>& cells,
                       const std::string& title, const std::string& comment) {
  if (cells.empty()) throw Error("write_heatmap_svg: no cells");
  Mapper m(domain.bounding_box());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : cells) {
    if (!(c.value > 0.0)) continue;
    lo = std::min(lo, std::log(c.value));
    hi = std::max(hi, std::log(c.value));
  }
  if (!(hi > lo)) hi = lo + 1.0;

  std::ofstream os = open_svg(path, comment);
  double r = std::max(2.0, 0.45 * (kW - 2 * kMargin) /
                               std::sqrt(static_cast<double>(cells.size())));
  for (const auto& c : cells) {
    double u = c.value > 0.0 ? (std::log(c.value) - lo) / (hi - lo) : 0.0;
    os << "<circle cx=\"" << m.px(c.x.x) << "\" cy=\"" << m.py(c.x.y)
       << "\" r=\"" << r << "\" fill=\"" << color(u) << "\"/>\n";
  }
  for (const auto& poly : domain.polylines()) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
          "points=\"";
    for (const auto& p : poly) os << m.px(p.x) << "," << m.py(p.y) << " ";
    os << "\"/>\n";
  }
  if (!title.empty())
    os << "<text x=\"" << kMargin << "\" y=\"24\" font-size=\"16\">" << title
       << "</text>\n";
  os << "</svg>\n";
}

void write_profile_svg(const std::string& path,
                       const std::vector<ProfileSample>& samples,
                       const std::string& title, const std::string& comment) {
  if (samples.empty()) throw Error("write_profile_svg: no samples");
  double smin = samples.front().s, smax = samples.front().s;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (const auto& p : samples) {
    smin = std::min(smin, p.s);
    smax = std::max(smax, p.s);
    for (double v : {p.value, p.envelope}) {
      if (v > 0.0) {
        vmin = std::min(vmin, std::log10(v));
        vmax = std::max(vmax, std::log10(v));
      }
    }
  }
  vmin = std::max(vmin, vmax - 16.0);  // clip the log range
  if (!(vmax > vmin)) vmax = vmin + 1.0;

  auto px = [&](double s) {
    return kMargin + (kW - 2.0 * kMargin) * (s - smin) / (smax - smin);
  };
  auto py = [&](double v) {
    double lv = v > 0.0 ? std::log10(v) : vmin;
    lv = std::clamp(lv, vmin, vmax);
    return kH - kMargin - (kH - 2.0 * kMargin) * (lv - vmin) / (vmax - vmin);
  };

  std::ofstream os = open_svg(path, comment);
  const char* colors[2] = {"#1f77b4", "#d62728"};
  for (int series = 0; series < 2; ++series) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[series]
       << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& p : samples)
      os << px(p.s) << "," << py(series == 0 ? p.value : p.envelope) << " ";
    os << "\"/>\n";
  }
  if (!title.empty())
    os << "<text x=\"" << kMargin << "\" y=\"24\" font-size=\"16\">" << title
       << "</text>\n";
  os << "<text x=\"" << kW - 200 << "\" y=\"24\" font-size=\"12\" "
        "fill=\"#1f77b4\">|P|</text>\n";
  os << "<text x=\"" << kW - 140 << "\" y=\"24\" font-size=\"12\" "
        "fill=\"#d62728\">envelope</text>\n";
  os << "</svg>\n";
}

}  // namespace chf
