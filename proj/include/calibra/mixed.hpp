#pragma once

// Pointwise calibration checks on X x Y in orthonormal frames: mixed
// (m-k, k)-form evaluation against a differential, the generic sigma_k
// calibration constant, the Lichnerowicz energy split, the Wirtinger
// plane inequality, the fibration coarea bound and the AM-GM
// determinant bound.

#include "calibra/exterior.hpp"

namespace calibra {

/// Element of Lambda^{m-k}(R^m)* (x) Lambda^k(R^n)*, stored as the table
/// Phi_IJ over I in I_k^m (rows) and J in I_k^n (columns), i.e.
/// Phi = sum_IJ Phi_IJ eps_I e_{I^c} ^ e'_J with the sign eps_I chosen
/// so that eps_I e_{I^c} ^ e_I = vol.
struct MixedForm {
  int m = 0;
  int n = 0;
  int k = 0;
  Matrix coeffs;      // C(m,k) x C(n,k)
  double supNorm = 0; // sqrt(sum Phi_IJ^2)

  MixedForm() = default;
  MixedForm(int m_, int n_, int k_, Matrix table);
};

/// ((1_X, f)^* Phi) / vol at a point with df = A (n x m):
/// sum_IJ Phi_IJ det(A[J, I]).
double evaluateMixed(const MixedForm& phi, const Matrix& A);

/// (lhs, rhs) of the generic sigma_k calibration bound with the stated
/// constant k! C(m,k) C(n,k) supNorm |A|_2^k. Deliberately loose.
std::pair<double, double> lemma41Bound(const MixedForm& phi, const Matrix& A);

struct LichnerowiczSplit {
  double dNormSq = 0;     // |complex-linear part|^2 / 2
  double dBarNormSq = 0;  // |anti-linear part|^2 / 2
  double pairing = 0;     // (omega_g^{m-1} ^ f^* omega_h) / vol
};

/// Splits A : (R^{2m}, J_src) -> (R^{2n}, J_tgt) into complex-linear and
/// anti-linear parts and evaluates the Kaehler pairing form on it.
/// |A|_F^2 = 2 dNormSq + 2 dBarNormSq and
/// pairing = (m-1)! (dNormSq - dBarNormSq).
LichnerowiczSplit lichnerowiczSplit(const Matrix& A, const Matrix& Jsrc, const Matrix& Jtgt);

/// The mixed-form table of omega_g^{m-1} ^ omega_h on R^{2m} x R^{2n}
/// with the standard complex structures.
MixedForm kahlerPairingForm(int m, int n);

/// 1 - psi(frame) for an orthonormal m-frame in R^n (columns of `frame`).
double wirtingerCheck(const Matrix& frame, const KForm& psi);

/// (lhs, rhs) of the fibration bound: lhs = (A^* vol_Y ^ phi) / vol in an
/// adapted orthonormal frame, rhs = tau~_{m,n}(A). Requires m > n;
/// rank-deficient A gives (0, 0).
std::pair<double, double> fibrationCheck(const Matrix& A, const KForm& phi, double volScale = 1.0);

/// (det A, m^{-m} |A|_1^m); equality at nonnegative multiples of orthogonal maps.
std::pair<double, double> amgmDetCheck(const Matrix& A);

}  // namespace calibra
