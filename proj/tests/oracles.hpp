#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Eig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Cyclic Jacobi rotations on a symmetric matrix.
inline Eig jacobi_eigen(Eigen::MatrixXd a, int max_sweeps = 100) {
  const auto n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  Eig out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Generalized pencil (L, diag(d)) through the Jacobi oracle.
inline Eig jacobi_generalized(const Eigen::MatrixXd& l, const Eigen::VectorXd& d) {
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  Eig e = jacobi_eigen(s.asDiagonal() * l * s.asDiagonal());
  e.vectors = s.asDiagonal() * e.vectors;
  return e;
}

inline Eigen::MatrixXd brute_sq_distances(const Eigen::MatrixXd& p) {
  const auto n = p.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < p.cols(); ++k) s += (p(i, k) - p(j, k)) * (p(i, k) - p(j, k));
      d(i, j) = s;
    }
  return d;
}

/// k nearest by full stable sort of (distance, index).
inline std::vector<std::vector<Eigen::Index>> sorted_knn(const Eigen::MatrixXd& d, Eigen::Index k) {
  const auto n = d.rows();
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Eigen::Index>> all;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) all.emplace_back(d(i, j), j);
    std::sort(all.begin(), all.end());
    for (Eigen::Index r = 0; r < k; ++r) out[static_cast<std::size_t>(i)].push_back(all[static_cast<std::size_t>(r)].second);
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

/// 1/2 sum over all ordered pairs of |q_i - q_j|^2 W_ij.
inline double double_loop_dirichlet(const Eigen::MatrixXd& w, const Eigen::MatrixXd& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) s += (q.row(i) - q.row(j)).squaredNorm() * w(i, j);
  return 0.5 * s;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

/// Full-rank PSD matrix B^T B + shift I with spread-out spectrum.
inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = u(rng);
  std::uniform_real_distribution<double> shift(0.05, 1.0);
  return b.transpose() * b + shift(rng) * Eigen::MatrixXd::Identity(n, n);
}

/// Connected random weighted graph: random spanning tree plus extra edges.
inline Eigen::MatrixXd random_connected_weights(Eigen::Index n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> wt(0.1, 2.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(0, i - 1);
    const auto j = pick(rng);
    w(i, j) = w(j, i) = wt(rng);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (w(i, j) == 0.0 && u(rng) < p) w(i, j) = w(j, i) = wt(rng);
  return w;
}

/// Random Q with Q^T D Q = I and Q^T D 1 = 0 (n x m, m < n): Gaussian columns
/// D-orthogonalized against 1 and each other by Gram-Schmidt.
inline Eigen::MatrixXd random_feasible(const Eigen::VectorXd& d, Eigen::Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = d.size();
  Eigen::MatrixXd basis(n, m + 1);
  basis.col(0) = Eigen::VectorXd::Ones(n);
  for (Eigen::Index k = 1; k <= m; ++k)
    for (Eigen::Index i = 0; i < n; ++i) basis(i, k) = g(rng);
  auto dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a.array() * d.array() * b.array()).sum(); };
  for (Eigen::Index k = 0; k <= m; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < k; ++j) basis.col(k) -= dot(basis.col(k), basis.col(j)) * basis.col(j);
    basis.col(k) /= std::sqrt(dot(basis.col(k), basis.col(k)));
  }
  return basis.rightCols(m);
}

/// Orthogonal projector onto the span of the given orthonormal columns.
inline Eigen::MatrixXd projector(const Eigen::MatrixXd& cols) { return cols * cols.transpose(); }

}  // namespace oracle
