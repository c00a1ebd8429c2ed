#pragma once

#include <string>
#include <vector>

namespace magspec::io {

// Shortest round-trip decimal form of a double (17 significant digits),
// locale-independent.
std::string fmt17(double v);

// RFC-4180 CSV: comma separator, CRLF line endings, header row first,
// doubles rendered with fmt17.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& values);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Minimal SVG 1.1 document containing one autoscaled polyline.
std::string svg_polyline(const std::vector<std::pair<double, double>>& points, int width = 640,
                         int height = 480);

}  // namespace magspec::io
