#include "calibra/energy.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace calibra {

namespace {

void checkSpd(const Eigen::MatrixXd& S, const char* what) {
  if (S.rows() != S.cols()) throw std::domain_error(std::string(what) + ": metric must be square");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::domain_error(std::string(what) + ": metric not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error(std::string(what) + ": metric not positive definite");
}

}  // namespace

LinearMapData::LinearMapData(Eigen::MatrixXd A_)
    : A(std::move(A_)),
      srcMetric(Eigen::MatrixXd::Identity(A.cols(), A.cols())),
      tgtMetric(Eigen::MatrixXd::Identity(A.rows(), A.rows())) {}

LinearMapData::LinearMapData(Eigen::MatrixXd A_, Eigen::MatrixXd src, Eigen::MatrixXd tgt)
    : A(std::move(A_)), srcMetric(std::move(src)), tgtMetric(std::move(tgt)) {
  if (srcMetric.rows() != A.cols() || tgtMetric.rows() != A.rows())
    throw std::domain_error("LinearMapData: metric dimensions do not match the map");
  checkSpd(srcMetric, "LinearMapData src");
  checkSpd(tgtMetric, "LinearMapData tgt");
}

Eigen::MatrixXd spdInverseSqrt(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("spdInverseSqrt: matrix not SPD");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXd spdSqrt(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("spdSqrt: matrix not SPD");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd singularSpectrum(const LinearMapData& L) {
  const Eigen::MatrixXd W = spdInverseSqrt(L.srcMetric);
  const Eigen::MatrixXd B = W * L.A.transpose() * L.tgtMetric * L.A * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "singularSpectrum: eigensolver failed, |A| = " << L.A.norm();
    throw std::runtime_error(msg.str());
  }
  Eigen::VectorXd eigs = es.eigenvalues();
  for (int i = 0; i < eigs.size(); ++i) {
    if (eigs[i] < -1e-12 * std::max(1.0, B.norm())) {
      std::ostringstream msg;
      msg << "singularSpectrum: negative eigenvalue " << eigs[i] << " beyond clamp tolerance";
      throw std::runtime_error(msg.str());
    }
    eigs[i] = std::max(eigs[i], 0.0);
  }
  std::sort(eigs.data(), eigs.data() + eigs.size(), std::greater<double>());
  return eigs;
}

double schattenP(const LinearMapData& L, double p) {
  if (p <= 0.0) throw std::domain_error("schattenP: p must be positive");
  const Eigen::VectorXd a = singularSpectrum(L);
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) sum += std::pow(a[i], p / 2.0);
  return std::pow(sum, 1.0 / p);
}

double sigmaPQ(const LinearMapData& L, double p, double q) {
  if (q <= 0.0) throw std::domain_error("sigmaPQ: q must be positive");
  return std::pow(schattenP(L, p), q);
}

double tauM(const LinearMapData& L, double srcVolumeScale) {
  if (srcVolumeScale <= 0.0) throw std::domain_error("tauM: volume scale must be positive");
  if (L.targetDim() < L.sourceDim()) throw std::domain_error("tauM: requires n >= m");
  const Eigen::VectorXd a = singularSpectrum(L);
  return srcVolumeScale * std::sqrt(std::max(a.prod(), 0.0));
}

double tauTilde(const LinearMapData& L, double tgtVolumeScale) {
  if (tgtVolumeScale <= 0.0) throw std::domain_error("tauTilde: volume scale must be positive");
  if (L.sourceDim() < L.targetDim()) throw std::domain_error("tauTilde: requires m >= n");
  const Eigen::MatrixXd M = L.A * L.srcMetric.inverse() * L.A.transpose();
  return tgtVolumeScale * std::sqrt(std::max(M.determinant(), 0.0));
}

std::pair<double, double> normComparison(const LinearMapData& L, double p, double pPrime) {
  if (p <= 0.0 || pPrime < p) throw std::domain_error("normComparison: need 0 < p <= p'");
  const double m = static_cast<double>(L.sourceDim());
  return {schattenP(L, p), std::pow(m, 1.0 / p - 1.0 / pPrime) * schattenP(L, pPrime)};
}

}  // namespace calibra
