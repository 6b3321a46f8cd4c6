#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sweeprl/world.hpp"

namespace sweeprl {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws Error(MalformedCsv) when absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::size_t index) const;
};

/// Comma separated, first line is the header, no quoting. Throws
/// Error(MalformedCsv) on empty input, a header with no data rows, or rows
/// whose width differs from the header.
CsvTable parse_csv(std::string_view text);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 800;
  int height = 480;
  bool log_y = false;
};

/// Trailing moving average; window <= 1 returns the input.
std::vector<double> moving_average(const std::vector<double>& y, std::size_t window);

/// Standalone SVG 1.1: axes, ticks, legend, one polyline per series.
/// Output depends only on the inputs.
std::string line_chart_svg(const std::vector<Series>& series, const ChartOptions& opts);

struct BarGroup {
  std::string name;            // legend entry
  std::vector<double> values;  // one per category
};

std::string bar_chart_svg(const std::vector<std::string>& categories,
                          const std::vector<BarGroup>& groups, const ChartOptions& opts);

/// First column is x, every other column a series.
std::vector<Series> series_from_csv(const CsvTable& table);

struct PlotRequest {
  std::vector<std::string> csv_texts;
  std::vector<std::string> names;  // legend names when plotting one column per file
  std::string x_column;            // empty: first column
  std::string y_column;            // empty: every non-x column of each file
  std::size_t smooth = 1;
  ChartOptions chart;
};

/// Line chart from CSV inputs. With y_column set, each file contributes one
/// series; otherwise each file contributes all of its columns.
std::string emit_plot(const PlotRequest& request);

/// Top-down picture of the map, cleaned cells and the path taken.
std::string trajectory_svg(const GridMap& map, const std::vector<Cell>& trajectory,
                           const AgentState& final_state, int cell_px = 24);

}  // namespace sweeprl
