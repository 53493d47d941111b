#include "calibra/random.hpp"

#include <Eigen/QR>

#include <cmath>
#include <complex>

namespace calibra {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

Eigen::VectorXd gaussianVector(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = normal(rng);
  return v;
}

Eigen::MatrixXd gaussianMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) A(r, c) = normal(rng);
  return A;
}

Eigen::VectorXd randomUnitVector(int m, std::mt19937_64& rng) {
  Eigen::VectorXd v = gaussianVector(m, rng);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = gaussianVector(m, rng);
    norm = v.norm();
  }
  return v / norm;
}

Eigen::MatrixXd randomOrthogonal(int m, std::mt19937_64& rng) {
  const Eigen::MatrixXd A = gaussianMatrix(m, m, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i)
    if (R(i, i) < 0) Q.col(i) = -Q.col(i);
  return Q;
}

Eigen::MatrixXd randomSpd(int m, std::mt19937_64& rng, double lo, double hi) {
  const Eigen::MatrixXd Q = randomOrthogonal(m, rng);
  std::uniform_real_distribution<double> uni(lo, hi);
  Eigen::VectorXd eigs(m);
  for (int i = 0; i < m; ++i) eigs[i] = uni(rng);
  return Q * eigs.asDiagonal() * Q.transpose();
}

Eigen::MatrixXd standardComplexStructure(int q) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * q, 2 * q);
  for (int a = 0; a < q; ++a) {
    J(2 * a + 1, 2 * a) = 1.0;
    J(2 * a, 2 * a + 1) = -1.0;
  }
  return J;
}

Eigen::MatrixXd randomUnitaryEmbedded(int q, std::mt19937_64& rng) {
  using CMat = Eigen::MatrixXcd;
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat Z(q, q);
  for (int c = 0; c < q; ++c)
    for (int r = 0; r < q; ++r) Z(r, c) = std::complex<double>(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMat> qr(Z);
  CMat Q = qr.householderQ();
  const CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < q; ++i) {
    const std::complex<double> d = R(i, i);
    const double a = std::abs(d);
    if (a > 0) Q.col(i) *= d / a;
  }
  // z = x + iy maps to the 2x2 block [[x, -y], [y, x]]
  Eigen::MatrixXd U(2 * q, 2 * q);
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < q; ++c) {
      const double x = Q(r, c).real();
      const double y = Q(r, c).imag();
      U(2 * r, 2 * c) = x;
      U(2 * r, 2 * c + 1) = -y;
      U(2 * r + 1, 2 * c) = y;
      U(2 * r + 1, 2 * c + 1) = x;
    }
  return U;
}

}  // namespace calibra
