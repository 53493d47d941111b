#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calibra/random.hpp"
#include "calibra/torus.hpp"

#include <cmath>

using namespace calibra;

namespace {

TorusMapSpec squareIdentity(int gridN = 16) {
  return TorusMapSpec(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                      Matrix::Identity(2, 2), gridN);
}

}  // namespace

TEST_CASE("class norm on closed-form data") {
  CHECK(pNormSquared(squareIdentity()) == doctest::Approx(2.0));

  TorusMapSpec zero(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2), 8);
  CHECK(pNormSquared(zero) == doctest::Approx(0.0));

  Matrix G(1, 1), H(1, 1), Q(1, 1);
  G << 4;
  H << 9;
  Q << 2;
  CHECK(pNormSquared(TorusMapSpec(1, 1, G, H, Q, 8)) == doctest::Approx(9.0));
}

TEST_CASE("pairing against the class matrix") {
  const TorusMapSpec spec = squareIdentity();
  const Matrix P = spec.Q.transpose();
  CHECK(pairing(spec, P) == doctest::Approx(pNormSquared(spec)));

  Matrix reflect(2, 2);
  reflect << 1, 0, 0, -1;
  CHECK(pairing(spec, reflect) == doctest::Approx(0.0));

  // explicit orthogonalization: remove the P-component and the pairing vanishes
  auto rng = substream(kDefaultSeed, 41);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix M = gaussianMatrix(2, 2, rng);
    M -= pairing(spec, M) / pNormSquared(spec) * P;
    CHECK(std::abs(pairing(spec, M)) < 1e-12 * (1 + M.norm()));
  }
}

TEST_CASE("linear lifts saturate the first-order calibration bound") {
  const TorusMapSpec spec = squareIdentity();
  const CalibrationSweepReport r = sigma1CalibrationSweep(spec, 5000, kDefaultSeed, 2);
  CHECK(r.failures == 0);
  CHECK(r.minMargin >= -1e-10);
  CHECK(r.equalityResidual <= 1e-12);   // A = lambda P, lambda >= 0
  CHECK(r.negativeWitnessGap > 1.0);    // A = -P is strictly inside the bound

  // worker count does not change the sweep
  const CalibrationSweepReport r1 = sigma1CalibrationSweep(spec, 5000, kDefaultSeed, 1);
  CHECK(r.minMargin == r1.minMargin);
}

TEST_CASE("quadrature of the dirichlet density on linear data") {
  CHECK(energyQuadrature(squareIdentity(), 2, 2) == doctest::Approx(2.0));

  TorusMapSpec zero(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2), 8);
  CHECK(energyQuadrature(zero, 2, 2) == doctest::Approx(0.0));
}

TEST_CASE("winding integral of a monotone degree-one circle map") {
  TorusMapSpec spec(1, 1, Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                    512);
  spec.perturbation.resize(spec.gridPoints(), 1);
  const double twoPi = 2.0 * M_PI;
  for (std::int64_t i = 0; i < spec.gridPoints(); ++i) {
    const double x = (i + 0.5) / spec.gridN;
    spec.perturbation(i, 0) = std::sin(twoPi * x) / twoPi;
  }
  CHECK(energyQuadrature(spec, 1, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("calibration integral ignores the perturbation") {
  TorusMapSpec spec = squareIdentity(32);
  const InvarianceReport r = homotopyInvarianceCheck(spec, 20, kDefaultSeed);
  CHECK(r.pass);
  CHECK(r.target == doctest::Approx(2.0));
  CHECK(r.maxSpread <= 1e-10);
}

TEST_CASE("descent from the linear lift terminates immediately") {
  const FlowTrace t = minimizeEnergy(squareIdentity(), 2, 2);
  CHECK(t.iterations == 0);
  CHECK(t.converged);
  CHECK(t.finalEnergy == doctest::Approx(t.targetEnergy));
}

TEST_CASE("dirichlet descent flattens a perturbed circle map") {
  TorusMapSpec spec(1, 1, Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                    256);
  spec.perturbation.resize(spec.gridPoints(), 1);
  for (std::int64_t i = 0; i < spec.gridPoints(); ++i)
    spec.perturbation(i, 0) = 0.3 * std::sin(2.0 * M_PI * (i + 0.5) / spec.gridN);
  const FlowTrace t = minimizeEnergy(spec, 2, 2);
  CHECK(t.converged);
  CHECK(t.finalEnergy == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.supDeviationFromMean <= 1e-4);
  // monotone energy history
  for (std::size_t i = 1; i < t.energyHistory.size(); ++i)
    CHECK(t.energyHistory[i] <= t.energyHistory[i - 1] + 1e-14);
}

TEST_CASE("dirichlet descent reaches the closed-form class minimum") {
  Matrix Q(2, 2);
  Q << 1, 1, 0, 1;
  auto rng = substream(kDefaultSeed, 42);
  TorusMapSpec spec(2, 2, randomSpd(2, rng), randomSpd(2, rng), Q, 32);
  spec.perturbation = randomBandlimitedField(2, 2, 32, 0.1, kDefaultSeed);
  const FlowTrace t = minimizeEnergy(spec, 2, 2);
  CHECK(t.converged);
  CHECK(std::abs(t.finalEnergy - t.targetEnergy) <= 0.005 * std::abs(t.targetEnergy));
  CHECK(t.supDeviationFromMean <= 1e-3);
}

TEST_CASE("degree-k lower bound sits below the class energy") {
  const TorusMapSpec spec = squareIdentity();
  const CohomologyBoundReport r1 = cohomologyBound(spec, 1);
  CHECK(r1.bound > 0.0);
  CHECK(r1.bound <= r1.linearEnergy * (1 + 1e-12));

  TorusMapSpec zero(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2), 8);
  CHECK(cohomologyBound(zero, 1).bound == doctest::Approx(0.0));

  Matrix Q(2, 2);
  Q << 1, 0, 0, 2;
  const TorusMapSpec diag(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Q, 8);
  const CohomologyBoundReport r2 = cohomologyBound(diag, 2);
  CHECK(r2.compoundNorm == doctest::Approx(2.0));  // the single 2x2 minor
  CHECK(r2.bound > 0.0);
  CHECK(r2.bound <= r2.linearEnergy * (1 + 1e-12));
}

TEST_CASE("geodesic sampling reproduces closed-form invariants") {
  Matrix one(1, 1);
  one << 1;
  const TorusMapSpec circle(1, 1, one, one, one, 8);
  const IntersectionReport r1 = intersectionEstimate(circle, 50000, kDefaultSeed, 2);
  CHECK(r1.closedFormJF == doctest::Approx(2.0));
  CHECK(r1.jF == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r1.e2 == doctest::Approx(1.0));
  CHECK(r1.withinFourSigma);
  CHECK(r1.crokeFathiHolds);
  CHECK(r1.cauchySchwarzHolds);

  const IntersectionReport r2 = intersectionEstimate(squareIdentity(), 50000, kDefaultSeed, 2);
  CHECK(r2.closedFormJF == doctest::Approx(M_PI * 2.0));
  CHECK(r2.withinFourSigma);

  TorusMapSpec zero(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2), 8);
  const IntersectionReport r0 = intersectionEstimate(zero, 1000, kDefaultSeed);
  CHECK(r0.iF == doctest::Approx(0.0));
  CHECK(r0.jF == doctest::Approx(0.0));

  // deterministic in the worker count
  const IntersectionReport a = intersectionEstimate(squareIdentity(), 30000, kDefaultSeed, 1);
  const IntersectionReport b = intersectionEstimate(squareIdentity(), 30000, kDefaultSeed, 8);
  CHECK(a.jF == b.jF);
  CHECK(a.iF == b.iF);
}

TEST_CASE("perturbation fields are periodic and bandlimited") {
  const int gridN = 32;
  const Matrix u = randomBandlimitedField(2, 2, gridN, 0.1, kDefaultSeed);
  CHECK(u.rows() == gridN * gridN);
  CHECK(u.cols() == 2);
  CHECK(u.cwiseAbs().maxCoeff() > 0.0);
  CHECK(u.cwiseAbs().maxCoeff() < 10.0);  // a handful of O(amplitude) modes

  // distinct seeds give distinct fields
  const Matrix v = randomBandlimitedField(2, 2, gridN, 0.1, kDefaultSeed + 1);
  CHECK((u - v).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("experiment validation rejects malformed input") {
  Matrix Qhalf(2, 2);
  Qhalf << 1, 0, 0, 0.5;
  CHECK_THROWS_AS(TorusMapSpec(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Qhalf, 8),
                  std::domain_error);
  Matrix notSpd(2, 2);
  notSpd << 1, 2, 2, 1;
  CHECK_THROWS_AS(TorusMapSpec(2, 2, notSpd, Matrix::Identity(2, 2), Matrix::Identity(2, 2), 8),
                  std::domain_error);
  CHECK_THROWS_AS(TorusMapSpec(2, 2, Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                               Matrix::Identity(2, 2), 1),
                  std::domain_error);
}
