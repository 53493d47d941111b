#pragma once

// Flat local models (g_0, phi_0): the Kaehler 2-form, the quaternionic
// 4-form, the associative G2 3-form and the Cayley Spin(7) 4-form, with
// the pointwise checks they must satisfy (interior-product constancy,
// the sigma_{k,k} calibration inequality and its equality cases).

#include "calibra/exterior.hpp"

#include <cstdint>
#include <string>

namespace calibra {

enum class ModelTag { Kahler, Quaternionic, G2, Spin7 };

std::string toString(ModelTag tag);
ModelTag modelTagFromString(const std::string& s);

struct ModelForm {
  ModelTag tag;
  int q = 1;          // block count for Kahler/quaternionic, unused otherwise
  int m = 0;          // ambient dimension
  int k = 0;          // form degree
  KForm form;         // phi_0 w.r.t. the standard metric
  double normSq = 0;  // |phi_0|^2
  double iotaConstSq = 0;  // |iota_u phi_0|^2 for unit u, = k * normSq / m
};

/// Standard coordinate expression of the model form. Quaternionic
/// requires q >= 2 (dimension 4q >= 8).
ModelForm buildModel(ModelTag tag, int q = 1);

struct IotaReport {
  int samples = 0;
  double constant = 0;      // expected |iota_u phi_0|^2
  double maxDeviation = 0;  // max |measured - constant| over the samples
  bool constantWithinTol = false;
};

/// Samples unit vectors and measures |iota_u phi_0|^2 against the model constant.
IotaReport checkIotaConstancy(const ModelForm& model, int samples, double tol, std::uint64_t seed);

/// rhs - lhs of  A^* phi ^ *phi <= (|phi|^2/m) |A|_k^k vol.  Nonnegative
/// (up to roundoff) for every square A.
double verifyProp53(const ModelForm& model, const Matrix& A);

/// Pointwise pair ((m/|phi|^2) <A^* phi, phi>, |A|_k^k); first <= second,
/// equality for phi-preserving scaled isometries.
std::pair<double, double> sigmaKKCalibrationValue(const ModelForm& model, const Matrix& A);

}  // namespace calibra
