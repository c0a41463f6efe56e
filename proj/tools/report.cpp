#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace injnorm::tools {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size()) {
    throw std::logic_error("CsvTable: ragged row");
  }
  rows.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  j["flags"] = flags;
  j["seed"] = seed;
  j["version"] = version;
  j["wall_time_s"] = wall_time_s;
  return j.dump(2) + "\n";
}

void emit_output(const std::string& path, const std::string& text,
                 const RunManifest& manifest) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
  }
  std::ofstream mout(path + ".manifest.json", std::ios::binary);
  if (mout) mout << manifest.to_json();
}

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kMarginL = 64.0, kMarginR = 16.0, kMarginT = 18.0, kMarginB = 46.0;

const char* kPalette[] = {"#c0392b", "#2e6da4", "#7d3c98", "#1e8449",
                          "#b7950b", "#34495e"};

struct Ticks {
  double lo, hi, step;
};

Ticks nice_ticks(double lo, double hi) {
  if (!(hi > lo)) hi = lo + 1.0;
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

std::string render_svg(const std::vector<Series>& series,
                       const std::string& x_label, const std::string& y_label) {
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        first = false;
      }
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  const Ticks tx = nice_ticks(xlo, xhi);
  const Ticks ty = nice_ticks(ylo, yhi);
  const auto sx = [&](double x) {
    return kMarginL + (x - tx.lo) / (tx.hi - tx.lo) * (kWidth - kMarginL - kMarginR);
  };
  const auto sy = [&](double y) {
    return kHeight - kMarginB -
           (y - ty.lo) / (ty.hi - ty.lo) * (kHeight - kMarginT - kMarginB);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes + ticks
  svg << "<g stroke=\"#444\" fill=\"none\">";
  svg << "<path d=\"M" << sx(tx.lo) << ' ' << sy(ty.lo) << " H" << sx(tx.hi)
      << "\"/>";
  svg << "<path d=\"M" << sx(tx.lo) << ' ' << sy(ty.lo) << " V" << sy(ty.hi)
      << "\"/></g>\n";
  for (double x = tx.lo; x <= tx.hi + 1e-9 * tx.step; x += tx.step) {
    svg << "<line x1=\"" << sx(x) << "\" x2=\"" << sx(x) << "\" y1=\""
        << sy(ty.lo) << "\" y2=\"" << sy(ty.lo) + 4 << "\" stroke=\"#444\"/>";
    svg << "<text x=\"" << sx(x) << "\" y=\"" << sy(ty.lo) + 18
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y = ty.lo; y <= ty.hi + 1e-9 * ty.step; y += ty.step) {
    svg << "<line x1=\"" << sx(tx.lo) - 4 << "\" x2=\"" << sx(tx.lo)
        << "\" y1=\"" << sy(y) << "\" y2=\"" << sy(y) << "\" stroke=\"#444\"/>";
    svg << "<text x=\"" << sx(tx.lo) - 8 << "\" y=\"" << sy(y) + 4
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  svg << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\""
      << kHeight - 8 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"14\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) svg << ' ';
      svg << sx(series[s].x[i]) << ',' << sy(series[s].y[i]);
    }
    svg << "\"/>\n";
    const double ly = kMarginT + 16.0 * static_cast<double>(s) + 8.0;
    svg << "<line x1=\"" << kMarginL + 12 << "\" x2=\"" << kMarginL + 36
        << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>";
    svg << "<text x=\"" << kMarginL + 42 << "\" y=\"" << ly + 4 << "\">"
        << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace injnorm::tools
