#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"

namespace rootlap::render {

enum class ColorScale { linear, diverging };
enum class ImageFormat { svg, pgm };

struct HeatmapSpec {
  ColorScale scale = ColorScale::diverging;
  ImageFormat format = ImageFormat::svg;
  int cell_size = 8;
  std::string title;
};

inline ColorScale parse_color_scale(std::string_view s) {
  if (s == "linear") return ColorScale::linear;
  if (s == "diverging") return ColorScale::diverging;
  throw Error(ErrorKind::invalid_param, "unknown color scale '" + std::string(s) + "'");
}

inline ImageFormat parse_image_format(std::string_view s) {
  if (s == "svg") return ImageFormat::svg;
  if (s == "pgm") return ImageFormat::pgm;
  throw Error(ErrorKind::invalid_param, "unknown image format '" + std::string(s) + "'");
}

/// Position in [0, 1] of `value` on the scale: 0 is coldest, 1 hottest.
/// The diverging scale is centred on zero with range [-M, M], M = max |a_ij|.
inline double heat_level(double value, double lo, double hi, ColorScale scale) {
  if (scale == ColorScale::diverging) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    return m > 0.0 ? 0.5 + 0.5 * value / m : 0.5;
  }
  return hi > lo ? (value - lo) / (hi - lo) : 0.5;
}

/// Blue -> white -> red ramp.
inline std::array<int, 3> heat_color(double level) {
  level = std::clamp(level, 0.0, 1.0);
  auto channel = [](double x) { return static_cast<int>(std::lround(255.0 * std::clamp(x, 0.0, 1.0))); };
  if (level < 0.5) {
    const double s = level / 0.5;
    return {channel(s), channel(s), 255};
  }
  const double s = (1.0 - level) / 0.5;
  return {255, channel(s), channel(s)};
}

inline std::uint8_t heat_gray(double level) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(level, 0.0, 1.0)));
}

inline std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

inline void write_heatmap(std::ostream& out, const Eigen::MatrixXd& a, const HeatmapSpec& spec) {
  if (a.size() == 0) throw Error(ErrorKind::empty_input, "cannot render an empty matrix");
  if (spec.cell_size < 1) throw Error(ErrorKind::invalid_param, "cell size must be positive");
  const double lo = a.minCoeff();
  const double hi = a.maxCoeff();
  const auto rows = a.rows();
  const auto cols = a.cols();
  const int cell = spec.cell_size;

  if (spec.format == ImageFormat::pgm) {
    out << "P5\n" << cols * cell << ' ' << rows * cell << "\n255\n";
    for (Eigen::Index i = 0; i < rows; ++i)
      for (int y = 0; y < cell; ++y)
        for (Eigen::Index j = 0; j < cols; ++j) {
          const char g = static_cast<char>(heat_gray(heat_level(a(i, j), lo, hi, spec.scale)));
          for (int x = 0; x < cell; ++x) out.put(g);
        }
    return;
  }

  const auto width = cols * cell;
  const auto height = rows * cell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";
  if (!spec.title.empty()) out << "<title>" << spec.title << "</title>\n";
  out << "<desc>min " << fixed(lo, 6) << " max " << fixed(hi, 6) << "</desc>\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto c = heat_color(heat_level(a(i, j), lo, hi, spec.scale));
      out << "<rect x=\"" << j * cell << "\" y=\"" << i * cell << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"rgb(" << c[0] << ',' << c[1] << ',' << c[2] << ")\"/>\n";
    }
  }
  out << "</svg>\n";
}

struct ScatterSpec {
  int size = 480;
  int margin = 20;
  double radius = 2.5;
  std::string title;
};

/// 2-D scatter of the first two columns; y grows upward.
inline void write_scatter_svg(std::ostream& out, const Eigen::MatrixXd& xy, const ScatterSpec& spec = {},
                              const Eigen::VectorXd& color_by = {}) {
  if (xy.cols() < 2) throw Error(ErrorKind::dimension_mismatch, "scatter plot needs two columns");
  if (xy.rows() == 0) throw Error(ErrorKind::empty_input, "scatter plot has no points");
  const Eigen::Vector2d lo = xy.leftCols<2>().colwise().minCoeff();
  const Eigen::Vector2d hi = xy.leftCols<2>().colwise().maxCoeff();
  const double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-300});
  const double inner = spec.size - 2.0 * spec.margin;
  double cmin = 0.0, cmax = 1.0;
  const bool colored = color_by.size() == xy.rows();
  if (colored) {
    cmin = color_by.minCoeff();
    cmax = color_by.maxCoeff();
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.size << "\" height=\"" << spec.size
      << "\" viewBox=\"0 0 " << spec.size << ' ' << spec.size << "\">\n";
  if (!spec.title.empty()) out << "<title>" << spec.title << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    const double px = spec.margin + inner * (xy(i, 0) - lo(0)) / span;
    const double py = spec.size - spec.margin - inner * (xy(i, 1) - lo(1)) / span;
    std::string fill = "rgb(40,40,40)";
    if (colored) {
      const auto c = heat_color(heat_level(color_by(i), cmin, cmax, ColorScale::linear));
      fill = "rgb(" + std::to_string(c[0]) + ',' + std::to_string(c[1]) + ',' + std::to_string(c[2]) + ')';
    }
    out << "<circle cx=\"" << fixed(px) << "\" cy=\"" << fixed(py) << "\" r=\"" << fixed(spec.radius, 1)
        << "\" fill=\"" << fill << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace rootlap::render
