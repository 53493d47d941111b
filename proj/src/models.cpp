#include "calibra/models.hpp"

#include "calibra/energy.hpp"
#include "calibra/random.hpp"

#include <cmath>
#include <stdexcept>

namespace calibra {

namespace {

KForm kahlerForm(int q) {
  KForm omega(2 * q, 2);
  for (int a = 1; a <= q; ++a) omega += KForm::basis(2 * q, {2 * a - 1, 2 * a});
  return omega;
}

// Standard triple of 2-forms on H^q, one block of four coordinates per
// quaternion.
KForm quaternionicForm(int q) {
  const int m = 4 * q;
  KForm wI(m, 2), wJ(m, 2), wK(m, 2);
  for (int a = 0; a < q; ++a) {
    const int b = 4 * a;
    wI += KForm::basis(m, {b + 1, b + 2});
    wI += KForm::basis(m, {b + 3, b + 4});
    wJ += KForm::basis(m, {b + 1, b + 3});
    wJ += KForm::basis(m, {b + 2, b + 4}, -1.0);
    wK += KForm::basis(m, {b + 1, b + 4});
    wK += KForm::basis(m, {b + 2, b + 3});
  }
  return wedge(wI, wI) + wedge(wJ, wJ) + wedge(wK, wK);
}

// Associative 3-form, Harvey-Lawson sign convention.
KForm g2Form() {
  KForm phi(7, 3);
  phi += KForm::basis(7, {1, 2, 3});
  phi += KForm::basis(7, {1, 4, 5});
  phi += KForm::basis(7, {1, 6, 7});
  phi += KForm::basis(7, {2, 4, 6});
  phi += KForm::basis(7, {2, 5, 7}, -1.0);
  phi += KForm::basis(7, {3, 4, 7}, -1.0);
  phi += KForm::basis(7, {3, 5, 6}, -1.0);
  return phi;
}

KForm embed(const KForm& f, int m) {
  KForm out(m, f.k);
  const auto basis = multiIndexBasis(f.m, f.k);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (f.coeffs[i] != 0.0) out.coeffs[multiIndexRank(basis[i], m)] = f.coeffs[i];
  return out;
}

// Cayley form on R^8 = R^7 + R e_8: phi ^ e8 + *7(phi). Self-dual with
// the standard orientation (checked behaviorally in the test suite).
KForm spin7Form() {
  const KForm phi = g2Form();
  const KForm psi = hodgeStar(phi, MetricData::identity(7));
  return wedge(embed(phi, 8), KForm::basis(8, {8})) + embed(psi, 8);
}

}  // namespace

std::string toString(ModelTag tag) {
  switch (tag) {
    case ModelTag::Kahler: return "kahler";
    case ModelTag::Quaternionic: return "quaternionic";
    case ModelTag::G2: return "g2";
    case ModelTag::Spin7: return "spin7";
  }
  return "?";
}

ModelTag modelTagFromString(const std::string& s) {
  if (s == "kahler") return ModelTag::Kahler;
  if (s == "quaternionic") return ModelTag::Quaternionic;
  if (s == "g2") return ModelTag::G2;
  if (s == "spin7") return ModelTag::Spin7;
  throw std::domain_error("unknown model tag: " + s);
}

ModelForm buildModel(ModelTag tag, int q) {
  ModelForm model;
  model.tag = tag;
  model.q = q;
  switch (tag) {
    case ModelTag::Kahler:
      if (q < 1) throw std::domain_error("buildModel: kahler requires q >= 1");
      model.m = 2 * q;
      model.k = 2;
      model.form = kahlerForm(q);
      break;
    case ModelTag::Quaternionic:
      if (q < 2) throw std::domain_error("buildModel: quaternionic requires 4q >= 8");
      model.m = 4 * q;
      model.k = 4;
      model.form = quaternionicForm(q);
      break;
    case ModelTag::G2:
      model.m = 7;
      model.k = 3;
      model.form = g2Form();
      break;
    case ModelTag::Spin7:
      model.m = 8;
      model.k = 4;
      model.form = spin7Form();
      break;
  }
  model.normSq = innerEuclid(model.form, model.form);
  model.iotaConstSq = model.k * model.normSq / model.m;
  return model;
}

IotaReport checkIotaConstancy(const ModelForm& model, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("checkIotaConstancy: samples must be >= 1");
  IotaReport report;
  report.samples = samples;
  report.constant = model.iotaConstSq;
  for (int i = 0; i < samples; ++i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    const Vector u = randomUnitVector(model.m, rng);
    const KForm iota = interior(u, model.form);
    const double value = innerEuclid(iota, iota);
    report.maxDeviation = std::max(report.maxDeviation, std::abs(value - model.iotaConstSq));
  }
  report.constantWithinTol = report.maxDeviation <= tol;
  return report;
}

double verifyProp53(const ModelForm& model, const Matrix& A) {
  if (A.rows() != model.m || A.cols() != model.m)
    throw std::domain_error("verifyProp53: A must be m x m");
  const double lhs = innerEuclid(pullback(A, model.form), model.form);
  const double rhs = model.normSq / model.m *
                     std::pow(schattenP(LinearMapData(A), model.k), model.k);
  return rhs - lhs;
}

std::pair<double, double> sigmaKKCalibrationValue(const ModelForm& model, const Matrix& A) {
  if (A.rows() != model.m || A.cols() != model.m)
    throw std::domain_error("sigmaKKCalibrationValue: A must be m x m");
  const double pairing = model.m / model.normSq * innerEuclid(pullback(A, model.form), model.form);
  const double energy = std::pow(schattenP(LinearMapData(A), model.k), model.k);
  return {pairing, energy};
}

}  // namespace calibra
