#pragma once

#include <string>
#include <vector>

#include "specsense/csv.hpp"

namespace specsense {

enum class SeriesStyle { Line, Scatter };

struct SeriesSpec {
  std::string x_column;
  std::string y_column;
  std::string label;
  SeriesStyle style = SeriesStyle::Line;
  std::string color = "#1f77b4";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 400;
  std::vector<SeriesSpec> series;
};

/// Plot-area geometry; data coordinates map linearly (log10 for log_y)
/// onto [left, width - right] x [height - bottom, top].
struct PlotFrame {
  double left = 72, right = 24, top = 40, bottom = 52;
};

/// Deterministic SVG line/scatter plot of table columns. Non-finite
/// points (and nonpositive ones on a log axis) are skipped and break
/// lines. Throws std::out_of_range for a missing column and
/// std::invalid_argument for a non-numeric cell.
std::string render_svg(const CsvTable &table, const PlotSpec &spec);

std::string xml_escape(const std::string &text);

} // namespace specsense
