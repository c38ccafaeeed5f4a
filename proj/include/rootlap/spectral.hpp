#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"

namespace rootlap {

/// Inner product under which the eigenvectors are orthonormal.
enum class Metric { identity, diagonal };

/// Ascending eigenvalues with matching eigenvector columns of a symmetric
/// pencil (A, B), where B is the identity or a positive diagonal.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Metric metric = Metric::identity;
  /// Diagonal of B when metric == Metric::diagonal, empty otherwise.
  Eigen::VectorXd metric_diagonal;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

/// Square roots of the clamped eigenvalues, in source order.
struct RootSpectrum {
  Eigen::VectorXd root_eigenvalues;
  Eigen::VectorXd source_eigenvalues;
};

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-8;
inline constexpr double kRelativeZeroThreshold = 1e-9;

/// Eigenvalues at or below this value count as zero.
inline double zero_threshold(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return kRelativeZeroThreshold * std::max(eigenvalues.maxCoeff(), 0.0);
}

inline Eigen::Index count_zero_eigenvalues(const Eigen::VectorXd& eigenvalues) {
  const double tol = zero_threshold(eigenvalues);
  return (eigenvalues.array() <= tol).count();
}

namespace detail {

inline void require_square(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw Error(ErrorKind::dimension_mismatch, std::string(what) + " must be square and non-empty");
}

inline void require_symmetric(const Eigen::MatrixXd& a) {
  require_square(a, "matrix");
  if (!a.allFinite()) throw Error(ErrorKind::invalid_param, "matrix has non-finite entries");
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance)
    throw Error(ErrorKind::invalid_param, "matrix is not symmetric (max |A - A^T| = " + std::to_string(asym) + ")");
}

/// Makes the first entry whose magnitude is within round-off of the column
/// maximum positive. The slack keeps the choice stable when two entries agree
/// up to the last few bits.
inline void apply_sign_convention(Eigen::MatrixXd& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    auto col = vectors.col(k);
    const double peak = col.cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= peak * (1.0 - 1e-9)) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

inline SpectralDecomposition solve_symmetric(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::convergence_failure, "symmetric eigensolver did not converge");
  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues();
  dec.eigenvectors = solver.eigenvectors();
  return dec;
}

}  // namespace detail

/// Orthonormal eigendecomposition of a symmetric matrix (A is symmetrized
/// as (A + A^T)/2 first).
inline SpectralDecomposition symmetric_eigendecomposition(const Eigen::MatrixXd& a) {
  detail::require_symmetric(a);
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  SpectralDecomposition dec = detail::solve_symmetric(sym);
  detail::apply_sign_convention(dec.eigenvectors);
  return dec;
}

/// Solves L f = lambda D f through D^{-1/2} L D^{-1/2} y = lambda y with
/// f = D^{-1/2} y. Columns come out D-orthonormal.
inline SpectralDecomposition generalized_eigendecomposition(const Eigen::MatrixXd& l, const Eigen::VectorXd& d) {
  detail::require_symmetric(l);
  if (d.size() != l.rows()) throw Error(ErrorKind::dimension_mismatch, "metric diagonal length differs from matrix");
  if (!d.allFinite() || (d.array() <= 0.0).any())
    throw Error(ErrorKind::singular_metric, "metric diagonal must be strictly positive");
  const Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd sym = 0.5 * (l + l.transpose());
  const Eigen::MatrixXd reduced = inv_sqrt.asDiagonal() * sym * inv_sqrt.asDiagonal();
  SpectralDecomposition dec = detail::solve_symmetric(0.5 * (reduced + reduced.transpose()));
  dec.eigenvectors = inv_sqrt.asDiagonal() * dec.eigenvectors;
  detail::apply_sign_convention(dec.eigenvectors);
  dec.metric = Metric::diagonal;
  dec.metric_diagonal = d;
  return dec;
}

namespace detail {

/// sqrt(max(lambda, 0)), with eigenvalues at or below the zero threshold
/// mapped to exactly 0 so kernel round-off (1e-16) does not become 1e-8.
inline Eigen::VectorXd clamped_roots(const Eigen::VectorXd& eigenvalues) {
  const double tol = zero_threshold(eigenvalues);
  Eigen::VectorXd r(eigenvalues.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) r(k) = eigenvalues(k) > tol ? std::sqrt(eigenvalues(k)) : 0.0;
  return r;
}

}  // namespace detail

/// Unique PSD square root U diag(sqrt(max(lambda, 0))) U^T.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& a) {
  const SpectralDecomposition dec = symmetric_eigendecomposition(a);
  if (dec.eigenvalues.minCoeff() < -kPsdTolerance)
    throw Error(ErrorKind::not_psd, "matrix has eigenvalue " + std::to_string(dec.eigenvalues.minCoeff()) +
                                        " below -1e-8");
  const Eigen::VectorXd roots = detail::clamped_roots(dec.eigenvalues);
  Eigen::MatrixXd s = dec.eigenvectors * roots.asDiagonal() * dec.eigenvectors.transpose();
  return 0.5 * (s + s.transpose());
}

inline RootSpectrum root_spectrum(const SpectralDecomposition& dec) {
  return RootSpectrum{detail::clamped_roots(dec.eigenvalues), dec.eigenvalues};
}

inline double rayleigh_quotient(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  detail::require_square(a, "matrix");
  if (x.size() != a.rows()) throw Error(ErrorKind::dimension_mismatch, "vector length differs from matrix");
  const double norm2 = x.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorKind::zero_vector, "Rayleigh quotient of the zero vector");
  return x.dot(a * x) / norm2;
}

/// lambda_max / lambda_min of an ascending spectrum. With `positive_only`
/// the smallest eigenvalue above the zero threshold is used instead; without
/// it a zero (or negative) lambda_min yields +inf.
inline double operator_distortion(const Eigen::VectorXd& eigenvalues, bool positive_only) {
  if (eigenvalues.size() == 0) throw Error(ErrorKind::all_zero_spectrum, "empty spectrum");
  const double lmax = eigenvalues.maxCoeff();
  const double tol = zero_threshold(eigenvalues);
  if (!(lmax > tol) || lmax <= 0.0) throw Error(ErrorKind::all_zero_spectrum, "spectrum has no positive eigenvalue");
  if (!positive_only) {
    const double lmin = eigenvalues.minCoeff();
    if (lmin <= tol) return std::numeric_limits<double>::infinity();
    return lmax / lmin;
  }
  double lmin = lmax;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (eigenvalues(k) > tol) lmin = std::min(lmin, eigenvalues(k));
  return lmax / lmin;
}

inline double operator_distortion(const SpectralDecomposition& dec, bool positive_only) {
  return operator_distortion(dec.eigenvalues, positive_only);
}

/// Distortion of the square-root operator. Which eigenvalues are zero is
/// decided on the source spectrum: sqrt lifts round-off (1e-16 -> 1e-8) above
/// any relative threshold applied after the fact.
inline double operator_distortion(const RootSpectrum& roots, bool positive_only) {
  const Eigen::VectorXd& src = roots.source_eigenvalues;
  const double tol = zero_threshold(src);
  if (src.size() == 0 || !(src.maxCoeff() > tol) || src.maxCoeff() <= 0.0)
    throw Error(ErrorKind::all_zero_spectrum, "spectrum has no positive eigenvalue");
  const double rmax = roots.root_eigenvalues.maxCoeff();
  double rmin = rmax;
  bool has_zero = false;
  for (Eigen::Index k = 0; k < src.size(); ++k) {
    if (src(k) > tol)
      rmin = std::min(rmin, roots.root_eigenvalues(k));
    else
      has_zero = true;
  }
  if (!positive_only && has_zero) return std::numeric_limits<double>::infinity();
  return rmax / rmin;
}

}  // namespace rootlap
