#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "rootlap/graph.hpp"
#include "rootlap/spectral.hpp"

using namespace rootlap;
using Catch::Approx;

namespace {

Eigen::MatrixXd p2_laplacian() {
  Eigen::MatrixXd l(2, 2);
  l << 1, -1, -1, 1;
  return l;
}

Eigen::MatrixXd k3_laplacian() { return 3.0 * Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Ones(3, 3); }

Eigen::MatrixXd p3_laplacian() {
  Eigen::MatrixXd l(3, 3);
  l << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  return l;
}

double residual(const Eigen::MatrixXd& a, const SpectralDecomposition& dec, Index k) {
  Eigen::VectorXd bu = dec.eigenvectors.col(k);
  if (dec.metric == Metric::diagonal) bu = dec.metric_diagonal.cwiseProduct(bu);
  return (a * dec.eigenvectors.col(k) - dec.eigenvalues(k) * bu).norm();
}

void check_decomposition(const Eigen::MatrixXd& a, const SpectralDecomposition& dec) {
  const Index n = a.rows();
  for (Index k = 1; k < n; ++k) CHECK(dec.eigenvalues(k - 1) <= dec.eigenvalues(k));
  Eigen::MatrixXd gram = dec.eigenvectors.transpose() * dec.eigenvectors;
  if (dec.metric == Metric::diagonal)
    gram = dec.eigenvectors.transpose() * dec.metric_diagonal.asDiagonal() * dec.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  for (Index k = 0; k < n; ++k) CHECK(residual(a, dec, k) <= 1e-8 * std::max(1.0, std::abs(dec.eigenvalues(k))));
  for (Index k = 0; k < n; ++k) {
    const auto col = dec.eigenvectors.col(k);
    // The first entry within round-off of the peak is positive.
    for (Index i = 0; i < n; ++i)
      if (std::abs(col(i)) >= col.cwiseAbs().maxCoeff() * (1.0 - 1e-9)) {
        CHECK(col(i) > 0.0);
        break;
      }
  }
}

}  // namespace

TEST_CASE("symmetric eigendecomposition", "[spectral]") {
  SECTION("P2 closed form") {
    const auto dec = symmetric_eigendecomposition(p2_laplacian());
    CHECK(dec.eigenvalues(0) == Approx(0.0).margin(1e-14));
    CHECK(dec.eigenvalues(1) == Approx(2.0).epsilon(1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(dec.eigenvectors(0, 0) == Approx(s));
    CHECK(dec.eigenvectors(1, 0) == Approx(s));
    CHECK(dec.eigenvectors(0, 1) == Approx(s));
    CHECK(dec.eigenvectors(1, 1) == Approx(-s));
    check_decomposition(p2_laplacian(), dec);
  }
  SECTION("zero matrix") {
    const auto dec = symmetric_eigendecomposition(Eigen::MatrixXd::Zero(4, 4));
    CHECK(dec.eigenvalues.isZero(0.0));
    CHECK(dec.eigenvectors.isApprox(Eigen::MatrixXd::Identity(4, 4)));
  }
  SECTION("random 100x100 reconstructs and matches the Jacobi oracle") {
    std::mt19937_64 rng(2024);
    const Eigen::MatrixXd a = oracle::random_symmetric(100, rng);
    const auto dec = symmetric_eigendecomposition(a);
    const Eigen::MatrixXd rec = dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
    CHECK((rec - a).norm() / a.norm() < 1e-10);
    check_decomposition(a, dec);
    const auto ref = oracle::jacobi_eigen(a);
    CHECK((ref.values - dec.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("rejects asymmetric and non-square input") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 3, 4;
    CHECK_THROWS_AS(symmetric_eigendecomposition(a), Error);
    CHECK_THROWS_AS(symmetric_eigendecomposition(Eigen::MatrixXd::Zero(2, 3)), Error);
  }
  SECTION("tiny asymmetry is symmetrized") {
    Eigen::MatrixXd a = p2_laplacian();
    a(0, 1) += 1e-12;
    CHECK_NOTHROW(symmetric_eigendecomposition(a));
  }
}

TEST_CASE("generalized eigendecomposition", "[spectral]") {
  SECTION("D = I matches the symmetric solver") {
    std::mt19937_64 rng(5);
    const auto g = WeightedGraph::from_weights(oracle::random_connected_weights(30, 0.2, rng));
    const auto std_dec = symmetric_eigendecomposition(g.laplacian());
    const auto gen_dec = generalized_eigendecomposition(g.laplacian(), Eigen::VectorXd::Ones(30));
    CHECK((std_dec.eigenvalues - gen_dec.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    // Simple spectrum: vectors agree once signs are fixed the same way.
    CHECK((std_dec.eigenvectors - gen_dec.eigenvectors).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("P2 unit weights") {
    const auto dec = generalized_eigendecomposition(p2_laplacian(), Eigen::Vector2d(1, 1));
    CHECK(dec.eigenvalues(0) == Approx(0.0).margin(1e-14));
    CHECK(dec.eigenvalues(1) == Approx(2.0));
  }
  SECTION("single edge of weight 2") {
    const Eigen::MatrixXd l = 2.0 * p2_laplacian();
    const Eigen::Vector2d d(2, 2);
    const auto ref = oracle::jacobi_generalized(l, d);
    REQUIRE(ref.values(0) == Approx(0.0).margin(1e-14));
    REQUIRE(ref.values(1) == Approx(2.0).epsilon(1e-14));
    const auto dec = generalized_eigendecomposition(l, d);
    CHECK(dec.eigenvalues(0) == Approx(0.0).margin(1e-14));
    CHECK(dec.eigenvalues(1) == Approx(2.0).epsilon(1e-14));
    check_decomposition(l, dec);
  }
  SECTION("P3 trivial weights") {
    const Eigen::Vector3d d(1, 2, 1);
    const auto ref = oracle::jacobi_generalized(p3_laplacian(), d);
    REQUIRE((ref.values - Eigen::Vector3d(0, 1, 2)).cwiseAbs().maxCoeff() < 1e-14);
    const auto dec = generalized_eigendecomposition(p3_laplacian(), d);
    CHECK((dec.eigenvalues - Eigen::Vector3d(0, 1, 2)).cwiseAbs().maxCoeff() < 1e-14);
    check_decomposition(p3_laplacian(), dec);
  }
  SECTION("random weighted graphs satisfy the pencil invariants") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = WeightedGraph::from_weights(oracle::random_connected_weights(40, 0.15, rng));
      const auto dec = generalized_eigendecomposition(g.laplacian(), g.degrees());
      check_decomposition(g.laplacian(), dec);
      const auto ref = oracle::jacobi_generalized(g.laplacian(), g.degrees());
      CHECK((ref.values - dec.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SECTION("singular metric") {
    try {
      generalized_eigendecomposition(p2_laplacian(), Eigen::Vector2d(1, 0));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::singular_metric);
    }
  }
}

TEST_CASE("PSD matrix square root", "[spectral]") {
  SECTION("P2") {
    const Eigen::MatrixXd s = matrix_sqrt_psd(p2_laplacian());
    CHECK((s - p2_laplacian() / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("K3 root is L / sqrt 3") {
    const Eigen::MatrixXd l = k3_laplacian();
    const Eigen::MatrixXd expected = l / std::sqrt(3.0);
    REQUIRE((expected * expected - l).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd s = matrix_sqrt_psd(l);
    CHECK((s - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((s * s - l).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("identity is a fixed point") {
    CHECK((matrix_sqrt_psd(Eigen::MatrixXd::Identity(5, 5)) - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <
          1e-15);
  }
  SECTION("rejects indefinite matrices") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 2, 1;
    try {
      matrix_sqrt_psd(a);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::not_psd);
    }
  }
  SECTION("tiny negative round-off is clamped") {
    Eigen::MatrixXd a = p2_laplacian();
    a.diagonal().array() -= 1e-12;
    CHECK_NOTHROW(matrix_sqrt_psd(a));
  }
  SECTION("shares eigenvectors with A and has spectrum sqrt(lambda)") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd a = oracle::random_psd(20, rng);
      const auto dec_a = symmetric_eigendecomposition(a);
      const Eigen::MatrixXd s = matrix_sqrt_psd(a);
      CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const auto dec_s = symmetric_eigendecomposition(s);
      CHECK((dec_s.eigenvalues - dec_a.eigenvalues.cwiseSqrt()).cwiseAbs().maxCoeff() < 1e-10);
      // Random spectra are simple, and both use the same sign convention.
      CHECK((dec_s.eigenvectors - dec_a.eigenvectors).cwiseAbs().maxCoeff() < 1e-6);
      // sqrt(sqrt(A)) raised to the fourth power is A again.
      const Eigen::MatrixXd r = matrix_sqrt_psd(s);
      const Eigen::MatrixXd r4 = (r * r) * (r * r);
      CHECK((r4 - a).norm() / a.norm() < 1e-6);
    }
  }
  SECTION("degenerate spectrum: invariant subspaces match") {
    // K5 has eigenvalue 5 with multiplicity 4.
    const Eigen::MatrixXd l = 5.0 * Eigen::MatrixXd::Identity(5, 5) - Eigen::MatrixXd::Ones(5, 5);
    const auto dec_l = symmetric_eigendecomposition(l);
    const auto dec_s = symmetric_eigendecomposition(matrix_sqrt_psd(l));
    const Eigen::MatrixXd pl = oracle::projector(dec_l.eigenvectors.rightCols(4));
    const Eigen::MatrixXd ps = oracle::projector(dec_s.eigenvectors.rightCols(4));
    CHECK((pl - ps).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((dec_s.eigenvalues.tail(4).array() - std::sqrt(5.0)).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("root spectrum", "[spectral]") {
  auto roots_of = [](Eigen::VectorXd v) {
    SpectralDecomposition dec;
    dec.eigenvalues = std::move(v);
    return root_spectrum(dec).root_eigenvalues;
  };
  CHECK(roots_of(Eigen::Vector2d(0, 2)).isApprox(Eigen::Vector2d(0, std::sqrt(2.0))));
  CHECK(roots_of(Eigen::Vector3d(0, 1, 4)) == Eigen::Vector3d(0, 1, 2));
  const Eigen::VectorXd clamped = roots_of(Eigen::Vector2d(-1e-12, 3));
  CHECK(clamped(0) == 0.0);
  CHECK(clamped(1) == std::sqrt(3.0));

  std::mt19937_64 rng(4);
  const auto dec = symmetric_eigendecomposition(oracle::random_psd(30, rng));
  const auto roots = root_spectrum(dec);
  for (Index k = 0; k < 30; ++k) {
    CHECK(roots.root_eigenvalues(k) >= 0.0);
    if (k > 0) CHECK(roots.root_eigenvalues(k - 1) <= roots.root_eigenvalues(k));
    const double clamped_k = std::max(dec.eigenvalues(k), 0.0);
    CHECK(roots.root_eigenvalues(k) * roots.root_eigenvalues(k) == Approx(clamped_k).epsilon(1e-15));
  }
}

TEST_CASE("Rayleigh quotient", "[spectral]") {
  CHECK(rayleigh_quotient(p2_laplacian(), Eigen::Vector2d(1, -1)) == Approx(2.0));
  CHECK(rayleigh_quotient(p2_laplacian(), Eigen::Vector2d(1, 1)) == 0.0);
  try {
    rayleigh_quotient(p2_laplacian(), Eigen::Vector2d(0, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_vector);
  }
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd a = oracle::random_symmetric(25, rng);
  const auto dec = symmetric_eigendecomposition(a);
  for (Index k : {0, 3, 24}) CHECK(std::abs(rayleigh_quotient(a, dec.eigenvectors.col(k)) - dec.eigenvalues(k)) < 1e-10);
}

TEST_CASE("operator distortion", "[spectral]") {
  CHECK(operator_distortion(Eigen::Vector3d(0, 2, 4), true) == 2.0);
  CHECK(std::isinf(operator_distortion(Eigen::Vector3d(0, 2, 4), false)));
  CHECK(operator_distortion(symmetric_eigendecomposition(Eigen::MatrixXd::Identity(4, 4)), false) == Approx(1.0));
  try {
    operator_distortion(Eigen::Vector3d(0, 0, 0), true);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::all_zero_spectrum);
  }

  SECTION("square root takes the square root of the distortion") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd a = oracle::random_psd(15, rng);
      const double da = operator_distortion(symmetric_eigendecomposition(a), true);
      const double ds = operator_distortion(symmetric_eigendecomposition(matrix_sqrt_psd(a)), true);
      CHECK(ds == Approx(std::sqrt(da)).epsilon(1e-8));
      CHECK(ds <= da);
    }
  }
  SECTION("root spectrum of a singular Laplacian keeps the zero set of the source") {
    std::mt19937_64 rng(3);
    const auto g = WeightedGraph::from_weights(oracle::random_connected_weights(40, 0.1, rng));
    const auto dec = symmetric_eigendecomposition(g.laplacian());
    const double dl = operator_distortion(dec, true);
    CHECK(operator_distortion(root_spectrum(dec), true) == Approx(std::sqrt(dl)).epsilon(1e-12));
    CHECK(std::isinf(operator_distortion(root_spectrum(dec), false)));
  }
}
