#pragma once

#include <string>
#include <vector>

#include "kslog/core.hpp"
#include "kslog/diagnostics.hpp"

namespace kslog {

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

inline constexpr const char* kDiagnosticsHeader =
    "t,dt,mass_u,mass_v,max_u,min_u,F,dissipation_rhs,identity_residual";

/// Header line plus one line per row. Throws PreconditionError on empty rows.
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

/// Writes `content` to `path`, replacing it. Throws IoError.
void write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

/// Single-series line chart on a fixed 800x600 viewBox. With log_y the
/// nonpositive samples are dropped.
struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  bool log_y = false;
};

std::string svg_line_chart(const LineChart& chart);

/// Heat map over two axes; cell (i, j) has x = x_values[i], y = y_values[j]
/// and label labels[j * x_values.size() + i]. Known labels get fixed colors
/// (Global, BlowUp, Inconclusive, NumericalFailure).
struct HeatMap {
  std::string title;
  std::string x_name;
  std::string y_name;
  std::vector<double> x_values;
  std::vector<double> y_values;
  std::vector<std::string> labels;
};

std::string svg_heat_map(const HeatMap& map);

/// Columns x,u,v at cell centers.
std::string state_csv(const State& s, const Grid& g);

}  // namespace kslog
