#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace treewalk {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

/// Numeric table written as CSV: `# key: value` comment lines, then a header
/// row, then one line per row.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

void write_csv(const std::filesystem::path& path, const Table& table);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional error bars, same length as y
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
};

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// z[iy][ix] on the grid xs x ys; NaN cells are drawn grey.
void write_heatmap(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<double>& xs,
                   const std::vector<double>& ys, const std::vector<std::vector<double>>& z);

}  // namespace treewalk
