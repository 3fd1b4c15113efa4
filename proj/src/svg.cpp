#include "specsense/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace specsense {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

struct Series {
  std::vector<double> x, y; // y already on the plotted scale
};

} // namespace

std::string xml_escape(const std::string &text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += ch;
    }
  }
  return out;
}

std::string render_svg(const CsvTable &table, const PlotSpec &spec) {
  const PlotFrame f;
  const double w = spec.width;
  const double h = spec.height;
  const double plot_w = w - f.left - f.right;
  const double plot_h = h - f.top - f.bottom;

  std::vector<Series> data;
  Range xr, yr;
  for (const auto &s : spec.series) {
    Series d;
    d.x = table.numeric(s.x_column);
    d.y = table.numeric(s.y_column);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
      double &y = d.y[i];
      if (spec.log_y) y = y > 0 ? std::log10(y) : std::nan("");
      if (std::isfinite(d.x[i]) && std::isfinite(y)) {
        xr.add(d.x[i]);
        yr.add(y);
      }
    }
    data.push_back(std::move(d));
  }
  xr.settle();
  yr.settle();
  const auto px = [&](double x) { return f.left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto py = [&](double y) { return f.top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(w) + "\" height=\"" + fixed(h) +
         "\" viewBox=\"0 0 " + fixed(w) + " " + fixed(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(w) + "\" height=\"" + fixed(h) +
         "\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         xml_escape(spec.title) + "</text>\n";
  out += "<rect class=\"frame\" x=\"" + fixed(f.left) + "\" y=\"" + fixed(f.top) + "\" width=\"" +
         fixed(plot_w) + "\" height=\"" + fixed(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    const double x = px(xv);
    const double y = py(yv);
    out += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(f.top + plot_h) + "\" x2=\"" + fixed(x) +
           "\" y2=\"" + fixed(f.top + plot_h + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(f.top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(xv) + "</text>\n";
    out += "<line x1=\"" + fixed(f.left - 5) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(f.left) +
           "\" y2=\"" + fixed(y) + "\" stroke=\"black\"/>\n";
    const std::string label = spec.log_y ? "1e" + tick_label(yv) : tick_label(yv);
    out += "<text x=\"" + fixed(f.left - 8) + "\" y=\"" + fixed(y + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + label + "</text>\n";
  }
  out += "<text x=\"" + fixed(f.left + plot_w / 2) + "\" y=\"" + fixed(h - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xml_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fixed(f.top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fixed(f.top + plot_h / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";

  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto &style = spec.series[s];
    const auto &d = data[s];
    const std::string color = xml_escape(style.color);
    if (style.style == SeriesStyle::Scatter) {
      for (std::size_t i = 0; i < d.x.size(); ++i) {
        if (!std::isfinite(d.x[i]) || !std::isfinite(d.y[i])) continue;
        out += "<circle cx=\"" + fixed(px(d.x[i])) + "\" cy=\"" + fixed(py(d.y[i])) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      }
    } else {
      std::string points;
      const auto flush = [&] {
        if (!points.empty()) {
          out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
                 points + "\"/>\n";
        }
        points.clear();
      };
      for (std::size_t i = 0; i < d.x.size(); ++i) {
        if (!std::isfinite(d.x[i]) || !std::isfinite(d.y[i])) {
          flush();
          continue;
        }
        if (!points.empty()) points += ' ';
        points += fixed(px(d.x[i])) + "," + fixed(py(d.y[i]));
      }
      flush();
    }
    const double ly = f.top + 14 + 16 * static_cast<double>(s);
    const double lx = f.left + plot_w - 150;
    out += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" + fixed(lx + 18) +
           "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fixed(lx + 24) + "\" y=\"" + fixed(ly) + "\" font-size=\"11\">" +
           xml_escape(style.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace specsense
