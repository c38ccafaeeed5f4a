#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"
#include "rootlap/graph.hpp"
#include "rootlap/gsp.hpp"

namespace rootlap::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": not a number: '" + std::string(field) + "'");
  if (!std::isfinite(value))
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": non-finite value '" + std::string(field) + "'");
  return value;
}

inline Index parse_index(std::string_view field, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value < 0)
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": bad vertex index '" + std::string(field) + "'");
  return static_cast<Index>(value);
}

/// Rows of comma-separated reals; blank lines are skipped.
inline std::vector<std::vector<double>> read_csv_rows(std::istream& in, bool header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      row.push_back(parse_real(view.substr(start, comma - start), lineno));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(rows.front().size()) + " columns, got " +
                                        std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline PointCloud load_point_cloud(std::istream& in, bool header = false) {
  const auto rows = detail::read_csv_rows(in, header);
  if (rows.empty()) throw Error(ErrorKind::empty_input, "point cloud input has no rows");
  Eigen::MatrixXd points(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) points(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return PointCloud(std::move(points));
}

inline PointCloud load_point_cloud_string(const std::string& text, bool header = false) {
  std::istringstream in(text);
  return load_point_cloud(in, header);
}

/// Whitespace-separated `i j w` lines, 0-based; `#` starts a comment. The
/// vertex count is `vertices` when given, else a `# vertices N` line, else
/// one past the largest index.
inline WeightedGraph load_edge_list(std::istream& in, Index vertices = 0) {
  std::vector<WeightedEdge> edges;
  Index max_index = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      // "# vertices N" declares the vertex count, covering isolated vertices.
      std::istringstream directive{std::string(view.substr(hash + 1))};
      std::string word;
      long long declared = 0;
      if (directive >> word && word == "vertices" && directive >> declared && declared > 0 && vertices == 0)
        vertices = static_cast<Index>(declared);
      view = view.substr(0, hash);
    }
    std::istringstream fields{std::string(view)};
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 3)
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected 'i j w', got " +
                                        std::to_string(tok.size()) + " fields");
    WeightedEdge e{detail::parse_index(tok[0], lineno), detail::parse_index(tok[1], lineno),
                   detail::parse_real(tok[2], lineno)};
    if (e.first == e.second) throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": self loop");
    if (e.weight < 0.0) throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": negative weight");
    max_index = std::max({max_index, e.first, e.second});
    edges.push_back(e);
  }
  if (vertices == 0) {
    if (edges.empty()) throw Error(ErrorKind::empty_input, "edge list has no edges and no vertex count");
    vertices = max_index + 1;
  }
  if (max_index >= vertices) throw Error(ErrorKind::parse, "edge index exceeds vertex count");
  return WeightedGraph::from_edges(vertices, edges);
}

inline WeightedGraph load_edge_list_string(const std::string& text, Index vertices = 0) {
  std::istringstream in(text);
  return load_edge_list(in, vertices);
}

/// Single-column CSV; a multi-column file is rejected.
inline GraphSignal load_signal(std::istream& in, bool header = false) {
  const auto rows = detail::read_csv_rows(in, header);
  if (rows.empty()) throw Error(ErrorKind::empty_input, "signal input has no rows");
  if (rows.front().size() != 1) throw Error(ErrorKind::parse, "signal CSV must have exactly one column");
  Eigen::VectorXd v(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v(static_cast<Index>(i)) = rows[i][0];
  return GraphSignal(std::move(v));
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

inline void write_signal_csv(std::ostream& out, const GraphSignal& x) { write_matrix_csv(out, x.values()); }

inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# vertices " << g.size() << '\n';
  for (const auto& e : g.edges()) out << e.first << ' ' << e.second << ' ' << format_real(e.weight) << '\n';
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open input file '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open output file '" + path + "'");
  return out;
}

}  // namespace rootlap::io
