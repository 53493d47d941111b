#include "calibra/torus.hpp"

#include "calibra/energy.hpp"
#include "calibra/parallel.hpp"
#include "calibra/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace calibra {

namespace {

struct GridGeometry {
  int m;
  int N;
  std::vector<std::int64_t> strides;

  explicit GridGeometry(int m_, int N_) : m(m_), N(N_), strides(m_) {
    std::int64_t s = 1;
    for (int d = 0; d < m; ++d) {
      strides[d] = s;
      s *= N;
    }
  }
  std::int64_t total() const { return strides.back() * N; }
  int coord(std::int64_t idx, int d) const { return static_cast<int>((idx / strides[d]) % N); }
  std::int64_t shift(std::int64_t idx, int d, int delta) const {
    const int c = coord(idx, d);
    const int cNew = ((c + delta) % N + N) % N;
    return idx + static_cast<std::int64_t>(cNew - c) * strides[d];
  }
};

// sigma_{p,q} and its gradient w.r.t. the whitened differential
// C = H^{1/2} A G^{-1/2}.
double sigmaOfWhitened(const Matrix& C, double p, double q) {
  if (p == 2.0) return std::pow(C.squaredNorm(), q / 2.0);
  Eigen::JacobiSVD<Matrix> svd(C);
  double t = 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i) t += std::pow(svd.singularValues()[i], p);
  return std::pow(t, q / p);
}

Matrix sigmaGradOfWhitened(const Matrix& C, double p, double q) {
  if (p == 2.0 && q == 2.0) return 2.0 * C;
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = svd.singularValues();
  double t = 0.0;
  for (int i = 0; i < s.size(); ++i) t += std::pow(s[i], p);
  if (t <= 0.0) return Matrix::Zero(C.rows(), C.cols());
  Vector g(s.size());
  for (int i = 0; i < s.size(); ++i)
    g[i] = (s[i] > 1e-14) ? q * std::pow(t, q / p - 1.0) * std::pow(s[i], p - 1.0) : 0.0;
  return svd.matrixU() * g.asDiagonal() * svd.matrixV().transpose();
}

// Quadrature + gradient driver over the perturbation field.
class TorusEnergy {
 public:
  TorusEnergy(const TorusMapSpec& spec, double p, double q)
      : spec_(spec),
        geo_(spec.m, spec.gridN),
        p_(p),
        q_(q),
        Gis_(spdInverseSqrt(spec.G)),
        Hs_(spdSqrt(spec.H)),
        sqrtDetG_(std::sqrt(spec.G.determinant())) {
    if (p <= 0.0 || q <= 0.0) throw std::domain_error("energyQuadrature: p, q must be positive");
    if (spec.gridN < 4) throw std::domain_error("energyQuadrature: gridN must be >= 4");
  }

  Matrix differentialAt(const Matrix& u, std::int64_t idx) const {
    Matrix A = spec_.Q;
    const double scale = 0.5 * spec_.gridN;
    for (int d = 0; d < spec_.m; ++d) {
      const std::int64_t plus = geo_.shift(idx, d, +1);
      const std::int64_t minus = geo_.shift(idx, d, -1);
      for (int j = 0; j < spec_.n; ++j) A(j, d) += (u(plus, j) - u(minus, j)) * scale;
    }
    return A;
  }

  double energy(const Matrix& u) const {
    const std::int64_t T = geo_.total();
    double sum = 0.0;
    for (std::int64_t idx = 0; idx < T; ++idx)
      sum += sigmaOfWhitened(Hs_ * differentialAt(u, idx) * Gis_, p_, q_);
    return sqrtDetG_ * sum / static_cast<double>(T);
  }

  double energyAndGradient(const Matrix& u, Matrix& grad) const {
    const std::int64_t T = geo_.total();
    grad.setZero();
    double sum = 0.0;
    const double c = sqrtDetG_ / static_cast<double>(T);
    const double fd = 0.5 * spec_.gridN;
    for (std::int64_t idx = 0; idx < T; ++idx) {
      const Matrix C = Hs_ * differentialAt(u, idx) * Gis_;
      sum += sigmaOfWhitened(C, p_, q_);
      const Matrix S = Hs_ * sigmaGradOfWhitened(C, p_, q_) * Gis_;  // d sigma / dA
      for (int d = 0; d < spec_.m; ++d) {
        const std::int64_t plus = geo_.shift(idx, d, +1);
        const std::int64_t minus = geo_.shift(idx, d, -1);
        for (int j = 0; j < spec_.n; ++j) {
          grad(plus, j) += c * fd * S(j, d);
          grad(minus, j) -= c * fd * S(j, d);
        }
      }
    }
    return c * sum;
  }

  double linearEnergy() const {
    return sqrtDetG_ * sigmaOfWhitened(Hs_ * spec_.Q * Gis_, p_, q_);
  }

 private:
  const TorusMapSpec& spec_;
  GridGeometry geo_;
  double p_, q_;
  Matrix Gis_, Hs_;
  double sqrtDetG_;
};

}  // namespace

TorusMapSpec::TorusMapSpec(int m_, int n_, Matrix G_, Matrix H_, Matrix Q_, int gridN_)
    : m(m_), n(n_), G(std::move(G_)), H(std::move(H_)), Q(std::move(Q_)), gridN(gridN_) {
  if (m < 1 || n < 1) throw std::domain_error("TorusMapSpec: dimensions must be positive");
  MetricData gCheck(G);  // SPD validation
  MetricData hCheck(H);
  if (G.rows() != m || H.rows() != n) throw std::domain_error("TorusMapSpec: metric dimension mismatch");
  if (Q.rows() != n || Q.cols() != m) throw std::domain_error("TorusMapSpec: Q must be n x m");
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c)
      if (std::abs(Q(r, c) - std::round(Q(r, c))) > 1e-9)
        throw std::domain_error("TorusMapSpec: Q must have integer entries");
  if (gridN < 2) throw std::domain_error("TorusMapSpec: gridN too small");
  perturbation = Matrix::Zero(gridPoints(), n);
}

std::int64_t TorusMapSpec::gridPoints() const {
  std::int64_t t = 1;
  for (int d = 0; d < m; ++d) t *= gridN;
  return t;
}

Matrix TorusMapSpec::differentialAt(std::int64_t idx) const {
  GridGeometry geo(m, gridN);
  Matrix A = Q;
  const double scale = 0.5 * gridN;
  for (int d = 0; d < m; ++d) {
    const std::int64_t plus = geo.shift(idx, d, +1);
    const std::int64_t minus = geo.shift(idx, d, -1);
    for (int j = 0; j < n; ++j) A(j, d) += (perturbation(plus, j) - perturbation(minus, j)) * scale;
  }
  return A;
}

double pNormSquared(const TorusMapSpec& spec) {
  const Matrix P = spec.Q.transpose();
  return (P.transpose() * spec.G.inverse() * P * spec.H).trace();
}

double pairing(const TorusMapSpec& spec, const Matrix& M) {
  if (M.rows() != spec.m || M.cols() != spec.n)
    throw std::domain_error("pairing: expected an m x n pullback array");
  const Matrix P = spec.Q.transpose();
  return (P.transpose() * spec.G.inverse() * M * spec.H).trace();
}

CalibrationSweepReport sigma1CalibrationSweep(const TorusMapSpec& spec, std::int64_t trials,
                                              std::uint64_t seed, int workers) {
  const double pNormSq = pNormSquared(spec);
  if (pNormSq <= 0.0) throw std::domain_error("sigma1CalibrationSweep: requires Q != 0");
  const double pNorm = std::sqrt(pNormSq);
  const Matrix P = spec.Q.transpose();
  const Matrix Ginv = spec.G.inverse();

  struct Acc {
    double minMargin = std::numeric_limits<double>::infinity();
    std::int64_t failures = 0;
    Matrix worst;
  };
  auto perTrial = [&](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    const Matrix A = gaussianMatrix(spec.m, spec.n, rng);
    const double lhs = (P.transpose() * Ginv * A * spec.H).trace();
    const double aNorm = std::sqrt(std::max(0.0, (A.transpose() * Ginv * A * spec.H).trace()));
    Acc a;
    a.minMargin = pNorm * aNorm - lhs;
    a.worst = A;
    if (a.minMargin < -1e-10 * std::max(1.0, pNorm * aNorm)) a.failures = 1;
    return a;
  };
  auto combine = [](Acc lhs, const Acc& rhs) {
    if (rhs.minMargin < lhs.minMargin) {
      lhs.minMargin = rhs.minMargin;
      lhs.worst = rhs.worst;
    }
    lhs.failures += rhs.failures;
    return lhs;
  };
  const Acc acc = mapReduce(trials, workers, Acc{}, perTrial, combine);

  CalibrationSweepReport report;
  report.trials = trials;
  report.minMargin = acc.minMargin;
  report.failures = acc.failures;
  report.worstCase = acc.worst;
  // equality witness A = lambda P, lambda >= 0
  const double lambda = 0.75;
  report.equalityResidual =
      std::abs(pairing(spec, Matrix(lambda * P)) - pNorm * std::sqrt(lambda * lambda * pNormSq));
  // A = -P must be strictly below the bound
  report.negativeWitnessGap = pNorm * pNorm - pairing(spec, Matrix(-P));
  return report;
}

double energyQuadrature(const TorusMapSpec& spec, double p, double q) {
  TorusEnergy energy(spec, p, q);
  if (spec.perturbation.size() == 0 || spec.perturbation.cwiseAbs().maxCoeff() == 0.0)
    return energy.linearEnergy();  // integrand is constant
  return energy.energy(spec.perturbation);
}

InvarianceReport homotopyInvarianceCheck(const TorusMapSpec& spec, int trials, std::uint64_t seed,
                                         double tol) {
  InvarianceReport report;
  report.trials = trials;
  const double sqrtDetG = std::sqrt(spec.G.determinant());
  report.target = pNormSquared(spec) * sqrtDetG;
  TorusMapSpec work = spec;
  const std::int64_t T = spec.gridPoints();
  for (int t = 0; t < trials; ++t) {
    work.perturbation = randomBandlimitedField(spec.m, spec.n, spec.gridN, 0.1,
                                               splitmix64(seed ^ static_cast<std::uint64_t>(t)));
    double sum = 0.0;
    for (std::int64_t idx = 0; idx < T; ++idx)
      sum += pairing(spec, Matrix(work.differentialAt(idx).transpose()));
    const double value = sqrtDetG * sum / static_cast<double>(T);
    report.maxSpread = std::max(report.maxSpread, std::abs(value - report.target));
  }
  report.pass = report.maxSpread <= tol;
  return report;
}

FlowTrace minimizeEnergy(const TorusMapSpec& spec, double p, double q, double tol, int maxIter) {
  TorusEnergy energy(spec, p, q);
  FlowTrace trace;
  trace.targetEnergy = (p == 2.0 && q == 2.0)
                           ? pNormSquared(spec) * std::sqrt(spec.G.determinant())
                           : energy.linearEnergy();
  Matrix u = spec.perturbation;
  if (u.size() == 0) u = Matrix::Zero(spec.gridPoints(), spec.n);
  Matrix grad(u.rows(), u.cols());
  double E = energy.energyAndGradient(u, grad);
  trace.energyHistory.push_back(E);
  const double gTol = tol * std::max(1.0, std::abs(trace.targetEnergy));
  double step = 0.1;
  for (int iter = 0; iter < maxIter; ++iter) {
    const double gradInf = grad.cwiseAbs().maxCoeff();
    trace.gradientInfNorm = gradInf;
    if (gradInf <= gTol) {
      trace.converged = true;
      break;
    }
    const double gradSq = grad.squaredNorm();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Matrix uNew = u - step * grad;
      const double ENew = energy.energy(uNew);
      if (ENew <= E - 1e-4 * step * gradSq) {
        u = uNew;
        E = ENew;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow; gradient verdict stands
    E = energy.energyAndGradient(u, grad);
    trace.energyHistory.push_back(E);
    ++trace.iterations;
  }
  trace.gradientInfNorm = grad.cwiseAbs().maxCoeff();
  if (trace.gradientInfNorm <= gTol) trace.converged = true;
  trace.finalEnergy = E;
  const Eigen::RowVectorXd mean = u.colwise().mean();
  trace.supDeviationFromMean = (u.rowwise() - mean).cwiseAbs().maxCoeff();
  return trace;
}

CohomologyBoundReport cohomologyBound(const TorusMapSpec& spec, int k) {
  if (k < 1 || k > spec.m) throw std::domain_error("cohomologyBound: need 1 <= k <= m");
  CohomologyBoundReport report;
  report.k = k;
  const double sqrtDetG = std::sqrt(spec.G.determinant());
  const MetricData gMetric(spec.G);
  const MetricData hMetric(spec.H);
  const auto srcBasis = multiIndexBasis(spec.m, k);
  const auto tgtBasis = multiIndexBasis(spec.n, std::min(k, spec.n));
  if (k > spec.n) {
    // no degree-k cohomology on the target: pullback matrix is empty
    report.bound = 0.0;
    report.linearEnergy = energyQuadrature(spec, 2.0, k);
    return report;
  }

  const int N = static_cast<int>(srcBasis.size());
  const int d = static_cast<int>(tgtBasis.size());

  // Gram of the harmonic basis dx_I: integral of alpha_i ^ *alpha_j
  Matrix gram(N, N);
  Vector alphaNorm(N);
  for (int i = 0; i < N; ++i) {
    const KForm ai = KForm::basis(spec.m, srcBasis[i]);
    for (int j = 0; j < N; ++j)
      gram(i, j) = inner(ai, KForm::basis(spec.m, srcBasis[j]), gMetric) * sqrtDetG;
    alphaNorm[i] = std::sqrt(inner(ai, ai, gMetric));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  report.gramMinEigenvalue = es.eigenvalues().minCoeff();

  Vector betaNorm(d);
  for (int j = 0; j < d; ++j) {
    const KForm bj = KForm::basis(spec.n, tgtBasis[j]);
    betaNorm[j] = std::sqrt(inner(bj, bj, hMetric));
  }

  // degree-k pullback matrix: k-th compound of P = Q^T
  const Matrix Pk = compoundMatrix(Matrix(spec.Q.transpose()), k);
  report.compoundNorm = Pk.norm();

  // per-pair calibration constants from the generic sigma_k bound
  double factK = 1.0;
  for (int i = 2; i <= k; ++i) factK *= i;
  const double combo = factK * static_cast<double>(binomial(spec.m, k)) *
                       static_cast<double>(binomial(spec.n, k));
  double sumCsq = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < d; ++j) {
      const double cij = combo * alphaNorm[i] * betaNorm[j];
      sumCsq += cij * cij;
    }

  report.bound = (report.compoundNorm > 0.0)
                     ? report.gramMinEigenvalue / std::sqrt(sumCsq) * report.compoundNorm
                     : 0.0;
  report.linearEnergy = energyQuadrature(spec, 2.0, k);
  report.ratio = (report.linearEnergy > 0.0) ? report.bound / report.linearEnergy : 0.0;
  return report;
}

IntersectionReport intersectionEstimate(const TorusMapSpec& spec, std::int64_t samples,
                                        std::uint64_t seed, int workers) {
  IntersectionReport report;
  report.samples = samples;
  const double sqrtDetG = std::sqrt(spec.G.determinant());
  const double V = sphereVolume(spec.m);
  report.sphereVolume = V;
  report.liouvilleMass = sqrtDetG * V;
  const Matrix Gis = spdInverseSqrt(spec.G);

  struct Acc {
    double s1 = 0, s2 = 0, s4 = 0;
  };
  auto perTrial = [&](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    const Vector w = gaussianVector(spec.m, rng);
    const Vector v = Gis * w / std::max(w.norm(), 1e-300);
    const Vector Qv = spec.Q * v;
    const double len2 = Qv.dot(spec.H * Qv);
    return Acc{std::sqrt(len2), len2, len2 * len2};
  };
  auto combine = [](Acc a, const Acc& b) {
    a.s1 += b.s1;
    a.s2 += b.s2;
    a.s4 += b.s4;
    return a;
  };
  const Acc acc = mapReduce(samples, workers, Acc{}, perTrial, combine);
  const double S = static_cast<double>(samples);
  const double mean1 = acc.s1 / S;
  const double mean2 = acc.s2 / S;
  const double var2 = std::max(0.0, acc.s4 / S - mean2 * mean2);

  report.iF = report.liouvilleMass * mean1;
  report.jF = report.liouvilleMass * mean2;
  report.jFStdError = report.liouvilleMass * std::sqrt(var2 / S);
  report.closedFormJF = V / spec.m * pNormSquared(spec) * sqrtDetG;
  report.e2 = pNormSquared(spec) * sqrtDetG;

  report.withinFourSigma = std::abs(report.jF - report.closedFormJF) <=
                           4.0 * report.jFStdError + 1e-12 * std::abs(report.closedFormJF);
  // E_2 mu V^2 >= m i_f^2, with slack for the Monte-Carlo error in i_f
  const double mu = sqrtDetG;
  const double iFStdError = report.liouvilleMass *
                            std::sqrt(std::max(0.0, mean2 - mean1 * mean1) / S);
  report.crokeFathiHolds =
      report.e2 * mu * V * V >=
      spec.m * report.iF * report.iF - spec.m * (8.0 * report.iF * iFStdError + 1e-9);
  report.cauchySchwarzHolds =
      report.jF >= report.iF * report.iF / report.liouvilleMass - 1e-12 * (1.0 + report.jF);
  return report;
}

Matrix randomBandlimitedField(int m, int n, int gridN, double amplitude, std::uint64_t seed,
                              int modes) {
  GridGeometry geo(m, gridN);
  const std::int64_t T = geo.total();
  Matrix u = Matrix::Zero(T, n);
  auto rng = substream(seed, 0xBAD1A5ull);
  const int kMax = std::max(1, gridN / 8);
  std::uniform_int_distribution<int> freq(-kMax, kMax);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double twoPi = 2.0 * std::numbers::pi;
  for (int mode = 0; mode < modes; ++mode) {
    std::vector<int> kvec(m, 0);
    bool zero = true;
    while (zero) {
      for (int d = 0; d < m; ++d) {
        kvec[d] = freq(rng);
        if (kvec[d] != 0) zero = false;
      }
    }
    Vector a(n), b(n);
    for (int j = 0; j < n; ++j) {
      a[j] = amplitude * normal(rng);
      b[j] = amplitude * normal(rng);
    }
    for (std::int64_t idx = 0; idx < T; ++idx) {
      double phase = 0.0;
      for (int d = 0; d < m; ++d)
        phase += kvec[d] * (geo.coord(idx, d) + 0.5) / static_cast<double>(gridN);
      const double c = std::cos(twoPi * phase);
      const double s = std::sin(twoPi * phase);
      for (int j = 0; j < n; ++j) u(idx, j) += a[j] * c + b[j] * s;
    }
  }
  return u;
}

double sphereVolume(int m) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

}  // namespace calibra
