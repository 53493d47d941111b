#pragma once

// Singular-value energy densities of a linear map between inner-product
// spaces: |A|_p, sigma_{p,q}, the volume distortion tau_m, the coarea
// factor tau~_{m,n}, and the Hoelder comparison of |.|_p norms.

#include <Eigen/Dense>

namespace calibra {

/// Differential df_x : (R^m, srcMetric) -> (R^n, tgtMetric), A is n x m.
struct LinearMapData {
  Eigen::MatrixXd A;
  Eigen::MatrixXd srcMetric;  // m x m SPD
  Eigen::MatrixXd tgtMetric;  // n x n SPD

  explicit LinearMapData(Eigen::MatrixXd A_);
  LinearMapData(Eigen::MatrixXd A_, Eigen::MatrixXd src, Eigen::MatrixXd tgt);

  int sourceDim() const { return static_cast<int>(A.cols()); }
  int targetDim() const { return static_cast<int>(A.rows()); }
};

/// Inverse symmetric square root of an SPD matrix.
Eigen::MatrixXd spdInverseSqrt(const Eigen::MatrixXd& S);
Eigen::MatrixXd spdSqrt(const Eigen::MatrixXd& S);

/// Non-increasing eigenvalues of the metric Gram operator
/// G^{-1/2} A^T H A G^{-1/2}. Entries in [-1e-12, 0) are clamped to 0;
/// anything more negative is an error.
Eigen::VectorXd singularSpectrum(const LinearMapData& L);

/// |A|_p = (sum_i a_i^{p/2})^{1/p} with a_i the singular spectrum.
double schattenP(const LinearMapData& L, double p);

/// sigma_{p,q} = |A|_p^q.
double sigmaPQ(const LinearMapData& L, double p, double q);

/// Volume distortion of an immersion (n >= m): scale * sqrt(prod of spectrum).
double tauM(const LinearMapData& L, double srcVolumeScale = 1.0);

/// Coarea factor of a submersion (m >= n): scale * sqrt(det(A G^{-1} A^T)).
/// The target enters only through the volume scale.
double tauTilde(const LinearMapData& L, double tgtVolumeScale = 1.0);

/// (|A|_p, m^{1/p - 1/p'} |A|_{p'}); the first is never above the second.
std::pair<double, double> normComparison(const LinearMapData& L, double p, double pPrime);

}  // namespace calibra
