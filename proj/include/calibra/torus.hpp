#pragma once

// Flat-torus laboratory: the exact sigma_1 calibration of a homotopy
// class, energy quadrature and descent over periodic perturbations of a
// linear lift, the cohomological lower bound on E_k and the Monte-Carlo
// intersection invariants.

#include "calibra/exterior.hpp"

#include <cstdint>
#include <vector>

namespace calibra {

/// Flat-torus experiment: maps T^m -> T^n with lift x -> Qx + u(x),
/// Q integer (P = Q^T is the degree-1 cohomology matrix), u periodic.
struct TorusMapSpec {
  int m = 0;
  int n = 0;
  Matrix G;             // m x m SPD source metric
  Matrix H;             // n x n SPD target metric
  Matrix Q;             // n x m, integer entries
  int gridN = 64;       // grid points per dimension (midpoint nodes)
  Matrix perturbation;  // gridN^m x n, sample of u at the grid nodes

  TorusMapSpec() = default;
  TorusMapSpec(int m_, int n_, Matrix G_, Matrix H_, Matrix Q_, int gridN_ = 64);

  std::int64_t gridPoints() const;
  /// Differential Q + Du at a flattened grid index (n x m), centered
  /// differences with periodic wrap.
  Matrix differentialAt(std::int64_t idx) const;
};

/// ||P||^2 = tr(P^T G^{-1} P H) with P = Q^T.
double pNormSquared(const TorusMapSpec& spec);

/// <P, M> = tr(P^T G^{-1} M H) for an m x n pullback array M.
double pairing(const TorusMapSpec& spec, const Matrix& M);

struct CalibrationSweepReport {
  std::int64_t trials = 0;
  double minMargin = 0;
  std::int64_t failures = 0;
  double equalityResidual = 0;   // witness A = lambda P, lambda >= 0
  double negativeWitnessGap = 0; // strict gap at A = -P
  Matrix worstCase;
};

/// Random sweep of <P,A> <= ||P|| ||A|| plus the equality witnesses.
CalibrationSweepReport sigma1CalibrationSweep(const TorusMapSpec& spec, std::int64_t trials,
                                              std::uint64_t seed, int workers = 1);

/// Midpoint-rule integral of sigma_{p,q}(df) vol_g over the torus.
double energyQuadrature(const TorusMapSpec& spec, double p, double q);

struct InvarianceReport {
  int trials = 0;
  double target = 0;   // ||P||^2 sqrt(det G)
  double maxSpread = 0;
  bool pass = false;
};

/// Quadrature of the calibration integrand for random bandlimited
/// perturbations; all values must agree with the homotopy invariant.
InvarianceReport homotopyInvarianceCheck(const TorusMapSpec& spec, int trials, std::uint64_t seed,
                                         double tol = 1e-8);

struct FlowTrace {
  int iterations = 0;
  std::vector<double> energyHistory;
  double finalEnergy = 0;
  double targetEnergy = 0;
  double gradientInfNorm = 0;
  double supDeviationFromMean = 0;  // of the final perturbation field
  bool converged = false;
};

/// Gradient descent with Armijo backtracking on the perturbation field.
/// For (p,q) = (2,2) the infimum is the linear-lift energy
/// ||P||^2 sqrt(det G) and the minimizer is an affine map.
FlowTrace minimizeEnergy(const TorusMapSpec& spec, double p, double q, double tol = 1e-6,
                         int maxIter = 20000);

struct CohomologyBoundReport {
  int k = 0;
  double bound = 0;
  double linearEnergy = 0;  // E_k of the linear lift
  double ratio = 0;
  double gramMinEigenvalue = 0;
  double compoundNorm = 0;  // |P([f^*]^k)|
};

/// Exact flat-torus instantiation of the degree-k cohomology lower bound.
CohomologyBoundReport cohomologyBound(const TorusMapSpec& spec, int k);

struct IntersectionReport {
  std::int64_t samples = 0;
  double iF = 0;
  double jF = 0;
  double closedFormJF = 0;
  double jFStdError = 0;
  double e2 = 0;          // ||P||^2 sqrt(det G)
  double liouvilleMass = 0;
  double sphereVolume = 0;
  bool withinFourSigma = false;
  bool crokeFathiHolds = false;    // E2 mu V^2 >= m iF^2
  bool cauchySchwarzHolds = false; // jF >= iF^2 / (mu V)
};

/// Monte-Carlo estimates of the intersection invariants i_f, j_f for the
/// linear lift, with the closed form for comparison.
IntersectionReport intersectionEstimate(const TorusMapSpec& spec, std::int64_t samples,
                                        std::uint64_t seed, int workers = 1);

/// Periodic field synthesized from random Fourier modes with frequency
/// components bounded by max(1, gridN/8).
Matrix randomBandlimitedField(int m, int n, int gridN, double amplitude, std::uint64_t seed,
                              int modes = 6);

/// Volume of the unit sphere S^{m-1}.
double sphereVolume(int m);

}  // namespace calibra
