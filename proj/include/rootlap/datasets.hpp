#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"
#include "rootlap/graph.hpp"

namespace rootlap::datasets {

/// mt19937_64 output is fixed by the standard; the distributions are not,
/// so uniforms and normals are derived here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal, Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Swiss roll with intrinsic (roll-surface) coordinates kept alongside.
struct SwissRoll {
  PointCloud points;
  /// Column 0: arc length along the roll, column 1: height.
  Eigen::MatrixXd surface;
};

inline constexpr double kSwissRollStart = 1.5 * std::numbers::pi;
inline constexpr double kSwissRollEnd = 3.5 * std::numbers::pi;
inline constexpr double kSwissRollHeight = 30.0;

inline void require_size(Index n) {
  if (n < 4) throw Error(ErrorKind::invalid_param, "generators need n >= 4");
}

/// One turn of the spiral (x, z) = (t cos t, t sin t), t in [1.5 pi, 3.5 pi],
/// height 30. Sampling is uniform in surface area, so t^2 is drawn uniformly.
/// With these proportions the second nontrivial Laplacian mode runs across
/// the height rather than being a harmonic along the roll.
inline SwissRoll swiss_roll(Index n, std::uint64_t seed, double noise = 0.0) {
  require_size(n);
  if (noise < 0.0) throw Error(ErrorKind::invalid_param, "noise must be nonnegative");
  Rng rng(seed);
  Eigen::MatrixXd p(n, 3);
  Eigen::MatrixXd surface(n, 2);
  constexpr double a2 = kSwissRollStart * kSwissRollStart;
  constexpr double b2 = kSwissRollEnd * kSwissRollEnd;
  for (Index i = 0; i < n; ++i) {
    const double t = std::sqrt(a2 + (b2 - a2) * rng.uniform());
    const double h = kSwissRollHeight * rng.uniform();
    p(i, 0) = t * std::cos(t);
    p(i, 1) = h;
    p(i, 2) = t * std::sin(t);
    // Arc length of the spiral r = t from the start angle.
    auto arc = [](double s) { return 0.5 * (s * std::sqrt(1.0 + s * s) + std::asinh(s)); };
    surface(i, 0) = arc(t) - arc(kSwissRollStart);
    surface(i, 1) = h;
  }
  if (noise > 0.0)
    for (Index i = 0; i < n; ++i)
      for (Index d = 0; d < 3; ++d) p(i, d) += noise * rng.normal();
  return SwissRoll{PointCloud(std::move(p)), std::move(surface)};
}

/// S-shaped sheet: t in [-1.5 pi, 1.5 pi], (sin t, 2v, sign(t)(cos t - 1)).
inline PointCloud s_curve(Index n, std::uint64_t seed, double noise = 0.0) {
  require_size(n);
  if (noise < 0.0) throw Error(ErrorKind::invalid_param, "noise must be nonnegative");
  Rng rng(seed);
  Eigen::MatrixXd p(n, 3);
  for (Index i = 0; i < n; ++i) {
    const double t = 3.0 * std::numbers::pi * (rng.uniform() - 0.5);
    p(i, 0) = std::sin(t);
    p(i, 1) = 2.0 * rng.uniform();
    p(i, 2) = (t < 0.0 ? -1.0 : 1.0) * (std::cos(t) - 1.0);
  }
  if (noise > 0.0)
    for (Index i = 0; i < n; ++i)
      for (Index d = 0; d < 3; ++d) p(i, d) += noise * rng.normal();
  return PointCloud(std::move(p));
}

/// Unit circle at uniformly random angles, with optional Gaussian jitter.
inline PointCloud circle(Index n, std::uint64_t seed, double noise = 0.0) {
  require_size(n);
  if (noise < 0.0) throw Error(ErrorKind::invalid_param, "noise must be nonnegative");
  Rng rng(seed);
  Eigen::MatrixXd p(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    p(i, 0) = std::cos(angle);
    p(i, 1) = std::sin(angle);
  }
  if (noise > 0.0)
    for (Index i = 0; i < n; ++i)
      for (Index d = 0; d < 2; ++d) p(i, d) += noise * rng.normal();
  return PointCloud(std::move(p));
}

struct RandomGraphOptions {
  double edge_probability = 0.1;
  double min_weight = 0.1;
  double max_weight = 1.0;
  /// Adds a random spanning tree so the result is connected.
  bool connected = false;
};

/// Erdos-Renyi graph with uniform edge weights in [min_weight, max_weight].
inline WeightedGraph random_graph(Index n, std::uint64_t seed, const RandomGraphOptions& opt = {}) {
  require_size(n);
  if (!(opt.edge_probability >= 0.0 && opt.edge_probability <= 1.0))
    throw Error(ErrorKind::invalid_param, "edge probability must lie in [0, 1]");
  if (!(opt.min_weight > 0.0 && opt.max_weight >= opt.min_weight))
    throw Error(ErrorKind::invalid_param, "weights need 0 < min_weight <= max_weight");
  Rng rng(seed);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < opt.edge_probability) w(i, j) = w(j, i) = rng.uniform(opt.min_weight, opt.max_weight);
  if (opt.connected) {
    // Random permutation, then attach each vertex to a random earlier one.
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (Index i = n - 1; i > 0; --i)
      std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (Index k = 1; k < n; ++k) {
      const Index a = order[static_cast<std::size_t>(k)];
      const Index b = order[rng.below(static_cast<std::uint64_t>(k))];
      if (w(a, b) == 0.0) w(a, b) = w(b, a) = rng.uniform(opt.min_weight, opt.max_weight);
    }
  }
  return WeightedGraph::from_weights(std::move(w));
}

enum class DatasetKind { swiss_roll, s_curve, circle, random_graph };

inline DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "swiss_roll") return DatasetKind::swiss_roll;
  if (name == "s_curve") return DatasetKind::s_curve;
  if (name == "circle") return DatasetKind::circle;
  if (name == "random_graph") return DatasetKind::random_graph;
  throw Error(ErrorKind::invalid_param, "unknown dataset kind '" + std::string(name) + "'");
}

}  // namespace rootlap::datasets
