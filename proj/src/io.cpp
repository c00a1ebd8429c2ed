#include "magspec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace magspec::io {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(fmt17(v));
  rows_.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<std::string>& values) { rows_.push_back(values); }

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += "\r\n";
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::string svg_polyline(const std::vector<std::pair<double, double>>& points, int width,
                         int height) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (!points.empty()) {
    x_lo = x_hi = points[0].first;
    y_lo = y_hi = points[0].second;
    for (const auto& p : points) {
      x_lo = std::min(x_lo, p.first);
      x_hi = std::max(x_hi, p.first);
      y_lo = std::min(y_lo, p.second);
      y_hi = std::max(y_hi, p.second);
    }
  }
  const double x_span = (x_hi > x_lo) ? x_hi - x_lo : 1.0;
  const double y_span = (y_hi > y_lo) ? y_hi - y_lo : 1.0;
  const double margin = 0.05;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) +
                    "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
                    "\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  char buf[64];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double px = (margin + (1.0 - 2.0 * margin) * (points[i].first - x_lo) / x_span) * width;
    // SVG y axis points down; flip so larger y plots higher
    const double py =
        (margin + (1.0 - 2.0 * margin) * (y_hi - points[i].second) / y_span) * height;
    std::snprintf(buf, sizeof(buf), "%s%.3f,%.3f", i ? " " : "", px, py);
    out += buf;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace magspec::io
