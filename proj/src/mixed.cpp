#include "calibra/mixed.hpp"

#include "calibra/energy.hpp"
#include "calibra/random.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace calibra {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void checkComplexStructure(const Matrix& J, const char* what) {
  const int d = static_cast<int>(J.rows());
  if (J.cols() != d || d % 2 != 0) throw std::domain_error(std::string(what) + ": need even square matrix");
  const Matrix I = Matrix::Identity(d, d);
  if ((J * J + I).cwiseAbs().maxCoeff() > 1e-10)
    throw std::domain_error(std::string(what) + ": J^2 != -1");
  if ((J.transpose() * J - I).cwiseAbs().maxCoeff() > 1e-10)
    throw std::domain_error(std::string(what) + ": J not orthogonal");
}

KForm standardKahlerForm(int q) {
  KForm omega(2 * q, 2);
  for (int a = 1; a <= q; ++a) omega += KForm::basis(2 * q, {2 * a - 1, 2 * a});
  return omega;
}

}  // namespace

MixedForm::MixedForm(int m_, int n_, int k_, Matrix table) : m(m_), n(n_), k(k_), coeffs(std::move(table)) {
  if (k < 0 || k > m || k > n) throw std::domain_error("MixedForm: degree out of range");
  if (coeffs.rows() != binomial(m, k) || coeffs.cols() != binomial(n, k))
    throw std::domain_error("MixedForm: table must be C(m,k) x C(n,k)");
  supNorm = coeffs.norm();
}

double evaluateMixed(const MixedForm& phi, const Matrix& A) {
  if (A.rows() != phi.n || A.cols() != phi.m)
    throw std::domain_error("evaluateMixed: A must be n x m");
  const Matrix minors = compoundMatrix(A, phi.k);  // rows J in I_k^n, cols I in I_k^m
  return (phi.coeffs.array() * minors.transpose().array()).sum();
}

std::pair<double, double> lemma41Bound(const MixedForm& phi, const Matrix& A) {
  const double lhs = evaluateMixed(phi, A);
  const double rhs = factorial(phi.k) * static_cast<double>(binomial(phi.m, phi.k)) *
                     static_cast<double>(binomial(phi.n, phi.k)) * phi.supNorm *
                     std::pow(A.norm(), phi.k);
  return {lhs, rhs};
}

MixedForm kahlerPairingForm(int m, int n) {
  const KForm omegaG = standardKahlerForm(m);
  KForm rho(2 * m, 0);
  rho.coeffs[0] = 1.0;
  for (int i = 0; i < m - 1; ++i) rho = wedge(rho, omegaG);
  // rho = sum_I c_I (*e_I)  <=>  c = coefficients of *rho  (** = +1 in degree 2)
  const Vector c = hodgeStar(rho, MetricData::identity(2 * m)).coeffs;
  const KForm omegaH = standardKahlerForm(n);
  return MixedForm(2 * m, 2 * n, 2, c * omegaH.coeffs.transpose());
}

LichnerowiczSplit lichnerowiczSplit(const Matrix& A, const Matrix& Jsrc, const Matrix& Jtgt) {
  checkComplexStructure(Jsrc, "lichnerowiczSplit Jsrc");
  checkComplexStructure(Jtgt, "lichnerowiczSplit Jtgt");
  if (Jsrc.rows() != A.cols() || Jtgt.rows() != A.rows())
    throw std::domain_error("lichnerowiczSplit: J dimensions do not match A");
  const Matrix plus = 0.5 * (A - Jtgt * A * Jsrc);   // complex-linear part
  const Matrix minus = 0.5 * (A + Jtgt * A * Jsrc);  // anti-linear part
  LichnerowiczSplit out;
  out.dNormSq = 0.5 * plus.squaredNorm();
  out.dBarNormSq = 0.5 * minus.squaredNorm();
  const int m = static_cast<int>(A.cols()) / 2;
  const int n = static_cast<int>(A.rows()) / 2;
  out.pairing = evaluateMixed(kahlerPairingForm(m, n), A);
  return out;
}

double wirtingerCheck(const Matrix& frame, const KForm& psi) {
  const int n = static_cast<int>(frame.rows());
  const int m = static_cast<int>(frame.cols());
  if (psi.m != n || psi.k != m) throw std::domain_error("wirtingerCheck: psi must be an m-form on R^n");
  const Matrix gram = frame.transpose() * frame;
  if ((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("wirtingerCheck: frame not orthonormal");
  const KForm pulled = pullback(frame, psi);  // top degree on R^m
  return 1.0 - pulled.coeffs[0];
}

std::pair<double, double> fibrationCheck(const Matrix& A, const KForm& phi, double volScale) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  if (m <= n) throw std::domain_error("fibrationCheck: requires m > n");
  if (phi.m != m || phi.k != m - n)
    throw std::domain_error("fibrationCheck: phi must be an (m-n)-form on R^m");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector s = svd.singularValues();
  if (s[n - 1] <= 1e-12 * std::max(1.0, s[0])) return {0.0, 0.0};  // critical point
  Matrix V = svd.matrixV();
  // adapted frame: first n columns span ker(A)^perp, the rest span ker(A)
  double a = (A * V.leftCols(n)).determinant() * volScale;
  if (a < 0) {
    V.col(0) *= -1.0;
    a = -a;
  }
  if (V.determinant() < 0) V.col(m - 1) *= -1.0;
  const KForm onKernel = pullback(Matrix(V.rightCols(m - n)), phi);
  const double lhs = a * onKernel.coeffs[0];
  const double rhs = tauTilde(LinearMapData(A), volScale);
  return {lhs, rhs};
}

std::pair<double, double> amgmDetCheck(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::domain_error("amgmDetCheck: A must be square");
  const int m = static_cast<int>(A.rows());
  const double lhs = A.determinant();
  const double rhs = std::pow(static_cast<double>(m), -m) * std::pow(schattenP(LinearMapData(A), 1.0), m);
  return {lhs, rhs};
}

}  // namespace calibra
