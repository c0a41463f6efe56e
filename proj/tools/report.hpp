#ifndef INJNORM_TOOLS_REPORT_HPP
#define INJNORM_TOOLS_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace injnorm::tools {

/// All numeric cells carry 12 significant digits.
std::string num(double v);

/// Rectangular comma-separated table, "." decimals, LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
};

/// Writes `text` to `path` (or stdout when path is empty) and, for real
/// files, drops a sibling `<path>.manifest.json` so the run can be replayed.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::uint64_t seed = 0;
  std::string version;
  double wall_time_s = 0.0;

  std::string to_json() const;
};

void emit_output(const std::string& path, const std::string& text,
                 const RunManifest& manifest);

/// One named curve for the SVG plot.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained line plot: axes, ticks, polylines, legend.
std::string render_svg(const std::vector<Series>& series,
                       const std::string& x_label, const std::string& y_label);

}  // namespace injnorm::tools

#endif  // INJNORM_TOOLS_REPORT_HPP
