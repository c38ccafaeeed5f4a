#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"

namespace rootlap {

using Index = Eigen::Index;

/// n sample points in l-dimensional Euclidean space, one point per row.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw Error(ErrorKind::empty_input, "point cloud needs at least one point and one dimension");
    if (!points_.allFinite())
      throw Error(ErrorKind::parse, "point cloud contains non-finite coordinates");
  }

  Index size() const noexcept { return points_.rows(); }
  Index dimension() const noexcept { return points_.cols(); }
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  auto point(Index i) const { return points_.row(i); }

 private:
  Eigen::MatrixXd points_;
};

/// Undirected edge stored with first < second.
struct Edge {
  Index first;
  Index second;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Symmetric boolean relation on n vertices, no self loops.
class Adjacency {
 public:
  explicit Adjacency(Index n) : n_(n), dense_(static_cast<std::size_t>(n * n), 0) {
    if (n < 1) throw Error(ErrorKind::invalid_param, "adjacency needs at least one vertex");
  }

  /// Adds the undirected edge {i, j}; repeated insertions are no-ops.
  void connect(Index i, Index j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw Error(ErrorKind::invalid_param, "edge endpoint out of range");
    if (i == j) throw Error(ErrorKind::invalid_param, "self loops are not allowed");
    if (has_edge(i, j)) return;
    dense_[slot(i, j)] = 1;
    dense_[slot(j, i)] = 1;
    edges_.push_back(Edge{std::min(i, j), std::max(i, j)});
    sorted_ = false;
  }

  bool has_edge(Index i, Index j) const { return dense_[slot(i, j)] != 0; }

  Index size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  /// Edges in lexicographic order.
  const std::vector<Edge>& edges() const {
    if (!sorted_) {
      std::sort(edges_.begin(), edges_.end());
      sorted_ = true;
    }
    return edges_;
  }

  friend bool operator==(const Adjacency& a, const Adjacency& b) {
    return a.n_ == b.n_ && a.dense_ == b.dense_;
  }

 private:
  std::size_t slot(Index i, Index j) const { return static_cast<std::size_t>(i * n_ + j); }

  Index n_;
  std::vector<char> dense_;
  mutable std::vector<Edge> edges_;
  mutable bool sorted_ = true;
};

struct WeightedEdge {
  Index first;
  Index second;
  double weight;
};

/// Symmetric nonnegative weights W with degrees D = rowsum(W) and L = D - W.
///
/// Dense storage is kept for W and L; the strictly positive edges are also
/// retained as a list for traversal.
class WeightedGraph {
 public:
  /// Validates W (square, finite, symmetric, nonnegative, zero diagonal).
  static WeightedGraph from_weights(Eigen::MatrixXd weights) {
    const Index n = weights.rows();
    if (n < 1 || weights.cols() != n)
      throw Error(ErrorKind::dimension_mismatch, "weight matrix must be square and non-empty");
    if (!weights.allFinite()) throw Error(ErrorKind::invalid_param, "weight matrix has non-finite entries");
    for (Index i = 0; i < n; ++i) {
      if (weights(i, i) != 0.0) throw Error(ErrorKind::invalid_param, "weight matrix diagonal must be zero");
      for (Index j = i + 1; j < n; ++j) {
        if (weights(i, j) != weights(j, i))
          throw Error(ErrorKind::invalid_param, "weight matrix must be symmetric");
        if (weights(i, j) < 0.0) throw Error(ErrorKind::invalid_param, "weights must be nonnegative");
      }
    }
    return WeightedGraph(std::move(weights));
  }

  /// Builds a graph on n vertices from undirected weighted edges. Repeating an
  /// edge with the same weight is allowed; conflicting weights are rejected.
  static WeightedGraph from_edges(Index n, const std::vector<WeightedEdge>& edges) {
    if (n < 1) throw Error(ErrorKind::invalid_param, "graph needs at least one vertex");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    for (const auto& e : edges) {
      if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
        throw Error(ErrorKind::invalid_param, "edge endpoint out of range");
      if (e.first == e.second) throw Error(ErrorKind::invalid_param, "self loops are not allowed");
      if (!std::isfinite(e.weight) || e.weight < 0.0)
        throw Error(ErrorKind::invalid_param, "edge weights must be finite and nonnegative");
      if (seen(e.first, e.second) && w(e.first, e.second) != e.weight)
        throw Error(ErrorKind::invalid_param, "conflicting weights for edge " + std::to_string(e.first) +
                                                  "-" + std::to_string(e.second));
      seen(e.first, e.second) = seen(e.second, e.first) = true;
      w(e.first, e.second) = w(e.second, e.first) = e.weight;
    }
    return WeightedGraph(std::move(w));
  }

  Index size() const noexcept { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
  const Eigen::MatrixXd& laplacian() const noexcept { return laplacian_; }
  /// Edges with strictly positive weight, first < second, lexicographic.
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

 private:
  explicit WeightedGraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
    const Index n = weights_.rows();
    degrees_ = weights_.rowwise().sum();
    laplacian_ = -weights_;
    laplacian_.diagonal() = degrees_;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (weights_(i, j) > 0.0) edges_.push_back(WeightedEdge{i, j, weights_(i, j)});
  }

  Eigen::MatrixXd weights_;
  Eigen::VectorXd degrees_;
  Eigen::MatrixXd laplacian_;
  std::vector<WeightedEdge> edges_;
};

struct ComponentPartition {
  std::vector<Index> labels;
  Index count = 0;

  /// Vertices of component c in ascending order.
  std::vector<Index> members(Index c) const {
    std::vector<Index> out;
    for (std::size_t v = 0; v < labels.size(); ++v)
      if (labels[v] == c) out.push_back(static_cast<Index>(v));
    return out;
  }
};

/// Squared Euclidean distances between all pairs of points.
///
/// Each entry is summed over dimensions in a fixed order, so the result does
/// not depend on `threads`.
inline Eigen::MatrixXd pairwise_sq_distances(const PointCloud& pc, unsigned threads = 1) {
  const Index n = pc.size();
  const Index l = pc.dimension();
  const Eigen::MatrixXd& p = pc.points();
  Eigen::MatrixXd d(n, n);

  auto rows = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      for (Index j = 0; j < n; ++j) {
        double s = 0.0;
        for (Index k = 0; k < l; ++k) {
          const double diff = p(i, k) - p(j, k);
          s += diff * diff;
        }
        d(i, j) = i == j ? 0.0 : std::max(s, 0.0);
      }
    }
  };

  if (threads <= 1 || n < 64) {
    rows(0, n);
    return d;
  }
  const Index workers = std::min<Index>(threads, n);
  const Index block = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (Index b = 0; b < n; b += block) pool.emplace_back(rows, b, std::min(n, b + block));
  for (auto& t : pool) t.join();
  return d;
}

/// Joins i and j when their squared distance is strictly below epsilon.
inline Adjacency build_epsilon_graph(const PointCloud& pc, double epsilon, const WarningSink& warnings = {},
                                     unsigned threads = 1) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_param, "epsilon must be positive");
  const Eigen::MatrixXd d = pairwise_sq_distances(pc, threads);
  Adjacency adj(pc.size());
  for (Index i = 0; i < pc.size(); ++i)
    for (Index j = i + 1; j < pc.size(); ++j)
      if (d(i, j) < epsilon) adj.connect(i, j);
  if (adj.empty()) warn(warnings, ErrorKind::degenerate_graph, "epsilon graph has no edges");
  return adj;
}

/// For each vertex, the indices of its k nearest other vertices; equal
/// distances are ordered by vertex index.
inline std::vector<std::vector<Index>> nearest_neighbors(const Eigen::MatrixXd& sq_dist, Index k) {
  const Index n = sq_dist.rows();
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    order.erase(order.begin() + i);
    auto closer = [&](Index a, Index b) {
      return sq_dist(i, a) < sq_dist(i, b) || (sq_dist(i, a) == sq_dist(i, b) && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    out[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
    order.resize(static_cast<std::size_t>(n));
  }
  return out;
}

/// Joins i and j when either is among the other's k nearest neighbours.
inline Adjacency build_knn_graph(const PointCloud& pc, Index n_neighbors, unsigned threads = 1) {
  if (n_neighbors < 1 || n_neighbors >= pc.size())
    throw Error(ErrorKind::invalid_param, "n_neighbors must satisfy 1 <= k < n");
  const auto nn = nearest_neighbors(pairwise_sq_distances(pc, threads), n_neighbors);
  Adjacency adj(pc.size());
  for (Index i = 0; i < pc.size(); ++i)
    for (Index j : nn[static_cast<std::size_t>(i)]) adj.connect(i, j);
  return adj;
}

/// W_ij = exp(-|p_i - p_j|^2 / t) on edges; t = +inf gives unit weights.
inline WeightedGraph apply_heat_kernel_weights(const Adjacency& adj, const PointCloud& pc, double t) {
  if (adj.size() != pc.size())
    throw Error(ErrorKind::dimension_mismatch, "adjacency and point cloud sizes differ");
  if (std::isnan(t) || t <= 0.0) throw Error(ErrorKind::invalid_param, "heat kernel t must be positive");
  const Index n = adj.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const bool trivial = std::isinf(t);
  for (const Edge& e : adj.edges()) {
    double value = 1.0;
    if (!trivial) {
      const double d2 = (pc.point(e.first) - pc.point(e.second)).squaredNorm();
      value = std::exp(-d2 / t);
    }
    w(e.first, e.second) = w(e.second, e.first) = value;
  }
  return WeightedGraph::from_weights(std::move(w));
}

inline WeightedGraph apply_trivial_weights(const Adjacency& adj) {
  const Index n = adj.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : adj.edges()) w(e.first, e.second) = w(e.second, e.first) = 1.0;
  return WeightedGraph::from_weights(std::move(w));
}

/// Median squared length over the edges of `adj`; a common default for the
/// heat kernel scale. Falls back to 1 on an edgeless graph.
inline double median_sq_edge_length(const Adjacency& adj, const PointCloud& pc) {
  std::vector<double> lengths;
  lengths.reserve(adj.edge_count());
  for (const Edge& e : adj.edges()) lengths.push_back((pc.point(e.first) - pc.point(e.second)).squaredNorm());
  if (lengths.empty()) return 1.0;
  const auto mid = lengths.begin() + static_cast<std::ptrdiff_t>(lengths.size() / 2);
  std::nth_element(lengths.begin(), mid, lengths.end());
  double m = *mid;
  if (lengths.size() % 2 == 0) m = 0.5 * (m + *std::max_element(lengths.begin(), mid));
  return m > 0.0 ? m : 1.0;
}

/// Components over strictly positive weights. The component of vertex 0 is
/// labelled 0 and each further unvisited vertex opens the next label.
inline ComponentPartition connected_components(const WeightedGraph& g) {
  const Index n = g.size();
  std::vector<std::vector<Index>> neighbors(static_cast<std::size_t>(n));
  for (const auto& e : g.edges()) {
    neighbors[static_cast<std::size_t>(e.first)].push_back(e.second);
    neighbors[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  ComponentPartition part;
  part.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> stack;
  for (Index start = 0; start < n; ++start) {
    if (part.labels[static_cast<std::size_t>(start)] != -1) continue;
    const Index label = part.count++;
    part.labels[static_cast<std::size_t>(start)] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index u : neighbors[static_cast<std::size_t>(v)]) {
        auto& slot = part.labels[static_cast<std::size_t>(u)];
        if (slot == -1) {
          slot = label;
          stack.push_back(u);
        }
      }
    }
  }
  return part;
}

}  // namespace rootlap
