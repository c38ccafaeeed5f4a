#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"
#include "rootlap/graph.hpp"
#include "rootlap/spectral.hpp"

namespace rootlap {

enum class EmbeddingMode { standard, root };

constexpr const char* mode_name(EmbeddingMode mode) noexcept {
  return mode == EmbeddingMode::root ? "root" : "standard";
}

/// n x m coordinates, one row per vertex, computed component by component.
struct Embedding {
  Eigen::MatrixXd coords;
  EmbeddingMode mode = EmbeddingMode::standard;
  bool per_component = true;
  ComponentPartition partition;
  /// For each component the m eigenvalues used (raw, or their square roots
  /// in root mode), ascending. Empty for singleton components.
  std::vector<Eigen::VectorXd> component_spectra;

  Eigen::Index dimension() const noexcept { return coords.cols(); }
};

struct EnergyReport {
  double dirichlet = 0.0;
  double root_dirichlet = 0.0;
  /// tr(Q^T L Q), kept for the cross-check against the pairwise form.
  double trace_form = 0.0;
  Eigen::VectorXd per_column;
};

struct ComponentConstraint {
  Eigen::Index component = 0;
  double scaling_violation = 0.0;      // max |Q^T D Q - I|
  double translation_violation = 0.0;  // max |Q^T D 1|
};

struct ConstraintReport {
  std::vector<ComponentConstraint> components;
  double max_scaling_violation = 0.0;
  double max_translation_violation = 0.0;
  bool passed = true;
};

inline constexpr double kConstraintTolerance = 1e-6;

namespace detail {

inline Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& a, const std::vector<Index>& idx) {
  const auto k = static_cast<Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) out(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  return out;
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<Index>& idx) {
  Eigen::VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) out(static_cast<Index>(r)) = v(idx[r]);
  return out;
}

}  // namespace detail

/// Laplacian eigenmaps on each connected component.
///
/// Solves L_c f = lambda D_c f, drops the eigenvectors at eigenvalue zero and
/// keeps the next m as coordinates. Both modes share this code path and give
/// identical coordinates; root mode reports sqrt(lambda) instead of lambda.
/// Singleton components sit at the origin.
inline Embedding eigenmaps(const WeightedGraph& g, Index m, EmbeddingMode mode) {
  if (m < 1) throw Error(ErrorKind::invalid_param, "embedding dimension must be at least 1");
  Embedding emb;
  emb.mode = mode;
  emb.partition = connected_components(g);
  emb.coords = Eigen::MatrixXd::Zero(g.size(), m);
  emb.component_spectra.resize(static_cast<std::size_t>(emb.partition.count));

  for (Index c = 0; c < emb.partition.count; ++c) {
    const auto members = emb.partition.members(c);
    const auto size = static_cast<Index>(members.size());
    if (size == 1) continue;
    if (size <= m)
      throw Error(ErrorKind::component_too_small, "component " + std::to_string(c) + " has " +
                                                      std::to_string(size) + " vertices, need more than " +
                                                      std::to_string(m));
    const Eigen::MatrixXd lc = detail::principal_submatrix(g.laplacian(), members);
    const Eigen::VectorXd dc = detail::gather(g.degrees(), members);
    const SpectralDecomposition dec = generalized_eigendecomposition(lc, dc);

    const Index zeros = std::max<Index>(count_zero_eigenvalues(dec.eigenvalues), 1);
    if (size - zeros < m)
      throw Error(ErrorKind::component_too_small, "component " + std::to_string(c) + " has only " +
                                                      std::to_string(size - zeros) + " nontrivial eigenvectors");
    for (Index r = 0; r < size; ++r)
      emb.coords.row(members[static_cast<std::size_t>(r)]) = dec.eigenvectors.block(r, zeros, 1, m);

    Eigen::VectorXd used = dec.eigenvalues.segment(zeros, m);
    if (mode == EmbeddingMode::root) used = used.cwiseMax(0.0).cwiseSqrt();
    emb.component_spectra[static_cast<std::size_t>(c)] = std::move(used);
  }
  return emb;
}

/// Discrete Dirichlet energy of Q: 1/2 sum_ij |q_i - q_j|^2 W_ij, checked
/// against tr(Q^T L Q).
inline EnergyReport dirichlet_energy(const WeightedGraph& g, const Eigen::MatrixXd& q) {
  if (q.rows() != g.size()) throw Error(ErrorKind::dimension_mismatch, "Q must have one row per vertex");
  EnergyReport report;
  report.per_column = Eigen::VectorXd::Zero(q.cols());
  // Each undirected edge stands for both (i, j) and (j, i), cancelling the 1/2.
  for (const auto& e : g.edges()) {
    for (Index k = 0; k < q.cols(); ++k) {
      const double diff = q(e.first, k) - q(e.second, k);
      report.per_column(k) += e.weight * diff * diff;
    }
  }
  report.dirichlet = report.per_column.sum();
  report.root_dirichlet = std::sqrt(report.dirichlet);
  report.trace_form = (q.transpose() * g.laplacian() * q).trace();

  // The trace form cancels terms of size sum_i D_ii |q_i|^2.
  const double scale = (g.degrees().asDiagonal() * q.rowwise().squaredNorm()).sum();
  const double gap = std::abs(report.trace_form - report.dirichlet);
  if (gap > 1e-8 * std::max(report.dirichlet, std::abs(report.trace_form)) + 1e-12 * scale)
    throw Error(ErrorKind::numerical, "pairwise and trace forms of the Dirichlet energy disagree");
  return report;
}

/// Per component, max |Q^T D Q - I| and max |Q^T D 1|. Singletons are exempt.
inline ConstraintReport verify_embedding_constraints(const Embedding& emb, const WeightedGraph& g) {
  if (emb.coords.rows() != g.size())
    throw Error(ErrorKind::dimension_mismatch, "embedding and graph sizes differ");
  ConstraintReport report;
  const Index m = emb.coords.cols();
  for (Index c = 0; c < emb.partition.count; ++c) {
    const auto members = emb.partition.members(c);
    if (members.size() < 2) continue;
    Eigen::MatrixXd qc(static_cast<Index>(members.size()), m);
    for (std::size_t r = 0; r < members.size(); ++r) qc.row(static_cast<Index>(r)) = emb.coords.row(members[r]);
    const Eigen::VectorXd dc = detail::gather(g.degrees(), members);

    ComponentConstraint cc;
    cc.component = c;
    const Eigen::MatrixXd gram = qc.transpose() * dc.asDiagonal() * qc;
    cc.scaling_violation = (gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    cc.translation_violation = (qc.transpose() * dc).cwiseAbs().maxCoeff();
    report.max_scaling_violation = std::max(report.max_scaling_violation, cc.scaling_violation);
    report.max_translation_violation = std::max(report.max_translation_violation, cc.translation_violation);
    report.components.push_back(cc);
  }
  report.passed = report.max_scaling_violation <= kConstraintTolerance &&
                  report.max_translation_violation <= kConstraintTolerance;
  return report;
}

}  // namespace rootlap
