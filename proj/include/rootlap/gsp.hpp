#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "rootlap/errors.hpp"
#include "rootlap/graph.hpp"
#include "rootlap/spectral.hpp"

namespace rootlap {

/// One finite real value per vertex.
class GraphSignal {
 public:
  explicit GraphSignal(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() < 1) throw Error(ErrorKind::empty_input, "signal is empty");
    if (!values_.allFinite()) throw Error(ErrorKind::invalid_param, "signal has non-finite values");
  }

  Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// Coefficient k pairs with eigenvector column k of the basis.
struct SpectrumCoefficients {
  Eigen::VectorXd coeffs;
};

struct QualityReport {
  double spectral_distortion = 0.0;
  double vertex_frequency_distortion = 0.0;
  double energy_distortion = 0.0;
  double variance_distortion = 0.0;
};

inline SpectrumCoefficients gft(const SpectralDecomposition& dec, const GraphSignal& x) {
  if (dec.metric != Metric::identity)
    throw Error(ErrorKind::invalid_param, "graph Fourier transform needs an orthonormal (identity metric) basis");
  if (x.size() != dec.eigenvectors.rows())
    throw Error(ErrorKind::dimension_mismatch, "signal length differs from basis size");
  return SpectrumCoefficients{dec.eigenvectors.transpose() * x.values()};
}

inline GraphSignal igft(const SpectralDecomposition& dec, const SpectrumCoefficients& c) {
  if (c.coeffs.size() != dec.eigenvectors.cols())
    throw Error(ErrorKind::dimension_mismatch, "coefficient count differs from basis size");
  return GraphSignal(dec.eigenvectors * c.coeffs);
}

/// The root Laplacian S = sqrt(L); it shares L's eigenvectors.
inline Eigen::MatrixXd root_gft_operator(const Eigen::MatrixXd& laplacian) { return matrix_sqrt_psd(laplacian); }

/// Spectrum of S taken from L's decomposition; same basis, eigenvalues sqrt(lambda).
inline SpectralDecomposition root_decomposition(const SpectralDecomposition& dec) {
  SpectralDecomposition out = dec;
  out.eigenvalues = root_spectrum(dec).root_eigenvalues;
  return out;
}

/// y = U diag(h(lambda_k)) U^T x for any callable gain h.
template <typename Gain>
  requires std::is_invocable_r_v<double, Gain, double>
GraphSignal apply_spectral_filter(const SpectralDecomposition& dec, const GraphSignal& x, Gain&& h) {
  const SpectrumCoefficients c = gft(dec, x);
  Eigen::VectorXd gains(dec.size());
  for (Index k = 0; k < dec.size(); ++k) {
    gains(k) = h(dec.eigenvalues(k));
    if (!std::isfinite(gains(k))) throw Error(ErrorKind::invalid_param, "filter gain is not finite on the spectrum");
  }
  return igft(dec, SpectrumCoefficients{gains.cwiseProduct(c.coeffs)});
}

struct IdentityFilter {
  double operator()(double) const noexcept { return 1.0; }
};

/// 1 for lambda <= cutoff, else 0.
struct IdealLowPass {
  double cutoff;
  double operator()(double lambda) const noexcept { return lambda <= cutoff ? 1.0 : 0.0; }
};

/// exp(-tau * lambda).
struct HeatFilter {
  double tau;
  double operator()(double lambda) const noexcept { return std::exp(-tau * lambda); }
};

/// lambda_max(after) / lambda_max(before).
inline double spectral_distortion(const Eigen::MatrixXd& l_before, const Eigen::MatrixXd& l_after) {
  const double before = symmetric_eigendecomposition(l_before).eigenvalues.maxCoeff();
  const double after = symmetric_eigendecomposition(l_after).eigenvalues.maxCoeff();
  if (!(before > 0.0)) throw Error(ErrorKind::degenerate_spectrum, "largest eigenvalue of the original operator is zero");
  return after / before;
}

/// Ratio of GFT coefficient ranges, (max c' - min c') / (max c - min c).
inline double vertex_frequency_distortion(const SpectralDecomposition& dec, const GraphSignal& before,
                                          const GraphSignal& after) {
  const Eigen::VectorXd c = gft(dec, before).coeffs;
  const Eigen::VectorXd c2 = gft(dec, after).coeffs;
  const double denom = c.maxCoeff() - c.minCoeff();
  if (!(denom > 0.0)) throw Error(ErrorKind::degenerate_signal, "GFT coefficients of the original signal are all equal");
  return (c2.maxCoeff() - c2.minCoeff()) / denom;
}

inline double energy_distortion(const GraphSignal& before, const GraphSignal& after) {
  if (before.size() != after.size()) throw Error(ErrorKind::dimension_mismatch, "signal lengths differ");
  const double e = before.values().squaredNorm();
  if (!(e > 0.0)) throw Error(ErrorKind::degenerate_signal, "original signal has zero energy");
  return after.values().squaredNorm() / e;
}

/// Population variance over vertices.
inline double signal_variance(const GraphSignal& x) {
  const Eigen::ArrayXd v = x.values().array();
  return (v - v.mean()).square().mean();
}

inline double variance_distortion(const GraphSignal& before, const GraphSignal& after) {
  if (before.size() != after.size()) throw Error(ErrorKind::dimension_mismatch, "signal lengths differ");
  const double v = signal_variance(before);
  if (!(v > 0.0)) throw Error(ErrorKind::degenerate_signal, "original signal has zero variance");
  return signal_variance(after) / v;
}

inline QualityReport quality_report(const Eigen::MatrixXd& l_before, const Eigen::MatrixXd& l_after,
                                    const SpectralDecomposition& dec, const GraphSignal& before,
                                    const GraphSignal& after) {
  return QualityReport{spectral_distortion(l_before, l_after), vertex_frequency_distortion(dec, before, after),
                       energy_distortion(before, after), variance_distortion(before, after)};
}

struct DilationResult {
  double value = 0.0;
  std::size_t skipped_pairs = 0;  // pairs that coincide in X
};

/// Finite-sample dilation sup_{i<j} |y_i - y_j| / |x_i - x_j|.
inline DilationResult map_dilation(const PointCloud& x, const PointCloud& y, const WarningSink& warnings = {}) {
  if (x.size() != y.size()) throw Error(ErrorKind::dimension_mismatch, "point clouds have different sizes");
  if (x.size() < 2) throw Error(ErrorKind::degenerate_input, "dilation needs at least two points");
  DilationResult out;
  bool any = false;
  for (Index i = 0; i < x.size(); ++i) {
    for (Index j = i + 1; j < x.size(); ++j) {
      const double dx = (x.point(i) - x.point(j)).norm();
      if (dx == 0.0) {
        ++out.skipped_pairs;
        continue;
      }
      const double ratio = (y.point(i) - y.point(j)).norm() / dx;
      if (!any || ratio > out.value) out.value = ratio;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::degenerate_input, "all source points coincide");
  if (out.skipped_pairs > 0)
    warn(warnings, ErrorKind::degenerate_input, std::to_string(out.skipped_pairs) + " coincident pairs skipped");
  return out;
}

}  // namespace rootlap
