#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calibra/energy.hpp"
#include "calibra/random.hpp"

#include <cmath>

using namespace calibra;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("singular spectrum on closed-form inputs") {
  const int m = 3;
  const VectorXd sId = singularSpectrum(LinearMapData(MatrixXd::Identity(m, m)));
  CHECK((sId - VectorXd::Ones(m)).cwiseAbs().maxCoeff() < 1e-14);

  MatrixXd D = MatrixXd::Zero(2, 2);
  D(0, 0) = 3;
  D(1, 1) = 4;
  const VectorXd sD = singularSpectrum(LinearMapData(D));
  CHECK(sD[0] == doctest::Approx(16.0));
  CHECK(sD[1] == doctest::Approx(9.0));

  const VectorXd sZ = singularSpectrum(LinearMapData(MatrixXd::Zero(2, 3)));
  CHECK(sZ.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum is invariant under metric-orthogonal changes of frame") {
  auto rng = substream(kDefaultSeed, 11);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3, n = 4;
    const MatrixXd G = randomSpd(m, rng);
    const MatrixXd H = randomSpd(n, rng);
    const MatrixXd A = gaussianMatrix(n, m, rng);
    // G-orthogonal V and H-orthogonal U from euclidean orthogonal seeds
    const MatrixXd V = spdInverseSqrt(G) * randomOrthogonal(m, rng) * spdSqrt(G);
    const MatrixXd U = spdInverseSqrt(H) * randomOrthogonal(n, rng) * spdSqrt(H);
    const VectorXd s1 = singularSpectrum(LinearMapData(A, G, H));
    const VectorXd s2 = singularSpectrum(LinearMapData(U * A * V, G, H));
    CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-10 * (1 + s1.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("schatten norms on closed-form inputs") {
  const int m = 4;
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(schattenP(LinearMapData(MatrixXd::Identity(m, m)), p) ==
          doctest::Approx(std::pow(m, 1.0 / p)));
  }
  MatrixXd D = MatrixXd::Zero(2, 2);
  D(0, 0) = 3;
  D(1, 1) = 4;
  CHECK(schattenP(LinearMapData(D), 1.0) == doctest::Approx(7.0));
  CHECK(schattenP(LinearMapData(D), 2.0) == doctest::Approx(5.0));
  CHECK(schattenP(LinearMapData(MatrixXd::Zero(3, 3)), 2.0) == doctest::Approx(0.0));

  CHECK(sigmaPQ(LinearMapData(MatrixXd::Identity(m, m)), 2, 2) == doctest::Approx(m));
  CHECK(sigmaPQ(LinearMapData(D), 4, 4) == doctest::Approx(337.0));
  CHECK(sigmaPQ(LinearMapData(D), 2, 2) == doctest::Approx(25.0));
}

TEST_CASE("volume distortion of immersions") {
  MatrixXd inc = MatrixXd::Zero(4, 2);
  inc(0, 0) = 1;
  inc(1, 1) = 1;
  CHECK(tauM(LinearMapData(inc)) == doctest::Approx(1.0));
  CHECK(tauM(LinearMapData(1.5 * inc)) == doctest::Approx(1.5 * 1.5));

  auto rng = substream(kDefaultSeed, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd A = gaussianMatrix(4, 2, rng);
    const Eigen::JacobiSVD<MatrixXd> svd(A);
    const double expected = svd.singularValues().prod();
    CHECK(tauM(LinearMapData(A)) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("coarea factor of submersions") {
  MatrixXd proj = MatrixXd::Zero(2, 3);
  proj(0, 0) = 1;
  proj(1, 1) = 1;
  CHECK(tauTilde(LinearMapData(proj)) == doctest::Approx(1.0));

  MatrixXd defic(2, 3);
  defic << 1, 2, 3, 2, 4, 6;  // rank 1
  CHECK(tauTilde(LinearMapData(defic)) == doctest::Approx(0.0).epsilon(1e-12));

  auto rng = substream(kDefaultSeed, 13);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd A = gaussianMatrix(2, 3, rng);
    const Eigen::JacobiSVD<MatrixXd> svd(A);
    const double expected = svd.singularValues().prod();
    CHECK(tauTilde(LinearMapData(A)) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("hoelder comparison of the |.|_p family") {
  const int m = 2;
  auto both = normComparison(LinearMapData(MatrixXd::Identity(m, m)), 1.0, 2.0);
  CHECK(both.first == doctest::Approx(both.second));

  MatrixXd D = MatrixXd::Zero(2, 2);
  D(0, 0) = 1;
  auto pair = normComparison(LinearMapData(D), 1.0, 2.0);
  CHECK(pair.first == doctest::Approx(1.0));
  CHECK(pair.second == doctest::Approx(std::sqrt(2.0)));

  auto rng = substream(kDefaultSeed, 14);
  for (int trial = 0; trial < 2000; ++trial) {
    const MatrixXd A = gaussianMatrix(3, 3, rng);
    auto [lhs, rhs] = normComparison(LinearMapData(A), 2.0, 4.0);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  CHECK_THROWS_AS(schattenP(LinearMapData(MatrixXd::Identity(2, 2)), 0.0), std::domain_error);
  CHECK_THROWS_AS(tauM(LinearMapData(MatrixXd::Identity(2, 3))), std::domain_error);   // n < m
  CHECK_THROWS_AS(tauTilde(LinearMapData(MatrixXd::Identity(3, 2))), std::domain_error);  // m < n
}
