#include "calibra/sweeps.hpp"

#include "calibra/energy.hpp"
#include "calibra/mixed.hpp"
#include "calibra/parallel.hpp"
#include "calibra/random.hpp"
#include "calibra/testing/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace calibra {

namespace {

struct Worst {
  double score = -std::numeric_limits<double>::infinity();  // larger = worse
  nlohmann::json payload;
};

struct Acc {
  double minMargin = std::numeric_limits<double>::infinity();
  double maxError = 0.0;
  std::int64_t failures = 0;
  Worst worst;
};

Acc combineAcc(Acc a, const Acc& b) {
  a.minMargin = std::min(a.minMargin, b.minMargin);
  a.maxError = std::max(a.maxError, b.maxError);
  a.failures += b.failures;
  if (b.worst.score > a.worst.score) a.worst = b.worst;
  return a;
}

template <typename PerTrial>
SuiteReport runSweep(const std::string& name, std::int64_t trials, int workers, PerTrial perTrial,
                     double marginFloor, double errorCeil) {
  const Acc acc = mapReduce(trials, workers, Acc{}, perTrial, combineAcc);
  SuiteReport report;
  report.suite = name;
  report.trials = trials;
  report.minMargin = acc.minMargin;
  report.maxError = acc.maxError;
  report.failures = acc.failures;
  report.worstCase = acc.worst.payload;
  report.pass = acc.failures == 0 && acc.minMargin >= marginFloor && acc.maxError <= errorCeil;
  return report;
}

SuiteReport lichnerowiczSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dims(1, 3);
    const int mC = dims(rng);
    const int nC = dims(rng);
    const Matrix Js = standardComplexStructure(mC);
    const Matrix Jt = standardComplexStructure(nC);
    Acc a;
    a.minMargin = 0.0;
    const Matrix A = gaussianMatrix(2 * nC, 2 * mC, rng);
    const auto split = lichnerowiczSplit(A, Js, Jt);
    const double energy = A.squaredNorm();
    const double scale = std::max(1.0, energy);
    double factM = 1.0;
    for (int f = 2; f <= mC - 1; ++f) factM *= f;
    const double errEnergy =
        std::abs(energy - 2.0 * split.dNormSq - 2.0 * split.dBarNormSq) / scale;
    const double errPairing =
        std::abs(split.pairing - factM * (split.dNormSq - split.dBarNormSq)) / scale;
    // complex-linear input from the same stream: dBar must vanish
    const Matrix B0 = gaussianMatrix(2 * nC, 2 * mC, rng);
    const Matrix B = 0.5 * (B0 - Jt * B0 * Js);
    const double errHolo = lichnerowiczSplit(B, Js, Jt).dBarNormSq;
    a.maxError = std::max({errEnergy, errPairing, errHolo / std::max(1.0, B.squaredNorm())});
    if (a.maxError > 1e-10) {
      a.failures = 1;
      a.worst = {a.maxError, {{"A", jsonFromMatrix(A)}}};
    }
    return a;
  };
  return runSweep("lichnerowicz", trials, workers, perTrial, -1e-30, 1e-10);
}

SuiteReport wirtingerSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  // 2-frames in R^4 against the Kaehler form
  KForm omega(4, 2);
  omega += KForm::basis(4, {1, 2});
  omega += KForm::basis(4, {3, 4});
  auto perTrial = [seed, omega](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    Matrix F = gaussianMatrix(4, 2, rng);
    // Gram-Schmidt
    F.col(0).normalize();
    F.col(1) -= F.col(0) * F.col(0).dot(F.col(1));
    F.col(1).normalize();
    const double margin = wirtingerCheck(F, omega);
    Acc a;
    a.minMargin = margin;
    a.worst = {-margin, {{"frame", jsonFromMatrix(F)}, {"margin", margin}}};
    if (margin < -1e-10 || margin > 2.0 + 1e-10) a.failures = 1;
    return a;
  };
  return runSweep("wirtinger", trials, workers, perTrial, -1e-10, 0.0);
}

SuiteReport fibrationSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> pick(0, 2);
    int m = 3, n = 1;
    KForm phi(3, 2);
    switch (pick(rng)) {
      case 0:
        phi = KForm::basis(3, {2, 3});
        break;
      case 1:
        m = 4;
        n = 2;
        phi = KForm::basis(4, {3, 4});
        break;
      default: {
        m = 4;
        n = 2;
        phi = KForm(4, 2);
        phi += KForm::basis(4, {1, 2});
        phi += KForm::basis(4, {3, 4});
        break;
      }
    }
    const Matrix A = gaussianMatrix(n, m, rng);
    const auto [lhs, rhs] = fibrationCheck(A, phi);
    Acc a;
    a.minMargin = rhs - lhs;
    a.worst = {lhs - rhs, {{"A", jsonFromMatrix(A)}, {"lhs", lhs}, {"rhs", rhs}}};
    if (lhs > rhs + 1e-9 * (1.0 + std::abs(rhs))) a.failures = 1;
    return a;
  };
  return runSweep("fibration", trials, workers, perTrial, -1e-9, 0.0);
}

SuiteReport amgmSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dims(1, 6);
    const int m = dims(rng);
    const Matrix A = gaussianMatrix(m, m, rng);
    const auto [lhs, rhs] = amgmDetCheck(A);
    Acc a;
    a.minMargin = rhs - lhs;
    a.worst = {lhs - rhs, {{"A", jsonFromMatrix(A)}, {"lhs", lhs}, {"rhs", rhs}}};
    if (lhs > rhs + 1e-10 * (1.0 + std::abs(rhs))) a.failures = 1;
    return a;
  };
  return runSweep("amgm", trials, workers, perTrial, -1e-10, 0.0);
}

SuiteReport lemma41Sweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dims(2, 6);
    std::uniform_int_distribution<int> degs(1, 3);
    const int m = dims(rng);
    const int n = dims(rng);
    const int k = std::min({degs(rng), m, n});
    const MixedForm phi(m, n, k,
                        gaussianMatrix(static_cast<int>(binomial(m, k)),
                                       static_cast<int>(binomial(n, k)), rng));
    const Matrix A = gaussianMatrix(n, m, rng);
    const auto [lhs, rhs] = lemma41Bound(phi, A);
    Acc a;
    a.minMargin = rhs - lhs;
    a.worst = {lhs - rhs, {{"A", jsonFromMatrix(A)}, {"lhs", lhs}, {"rhs", rhs}}};
    if (lhs > rhs + 1e-10 * (1.0 + std::abs(rhs))) a.failures = 1;
    return a;
  };
  return runSweep("lemma41", trials, workers, perTrial, -1e-10, 0.0);
}

SuiteReport mixedOracleSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dims(2, 5);
    std::uniform_int_distribution<int> degs(1, 3);
    const int m = dims(rng);
    const int n = dims(rng);
    const int k = std::min({degs(rng), m, n});
    const MixedForm phi(m, n, k,
                        gaussianMatrix(static_cast<int>(binomial(m, k)),
                                       static_cast<int>(binomial(n, k)), rng));
    const Matrix A = gaussianMatrix(n, m, rng);
    const double fast = evaluateMixed(phi, A);
    const double slow = testing::graphFrameEvaluate(phi, A);
    Acc a;
    a.minMargin = 0.0;
    a.maxError = std::abs(fast - slow) / std::max(1.0, std::abs(slow));
    a.worst = {a.maxError, {{"A", jsonFromMatrix(A)}, {"fast", fast}, {"oracle", slow}}};
    if (a.maxError > 1e-10) a.failures = 1;
    return a;
  };
  return runSweep("mixed-oracle", trials, workers, perTrial, -1e-30, 1e-10);
}

SuiteReport pullbackOracleSweep(std::int64_t trials, std::uint64_t seed, int workers) {
  auto perTrial = [seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> dims(1, 6);
    const int m = dims(rng);
    const int n = dims(rng);
    std::uniform_int_distribution<int> degs(0, std::min(m, n));
    const int k = degs(rng);
    const Matrix A = gaussianMatrix(n, m, rng);
    KForm beta(n, k, gaussianMatrix(static_cast<int>(binomial(n, k)), 1, rng).col(0));
    const KForm fast = pullback(A, beta);
    const KForm slow = testing::pullbackOracle(A, beta);
    Acc a;
    a.minMargin = 0.0;
    a.maxError = (fast.coeffs - slow.coeffs).cwiseAbs().maxCoeff() /
                 std::max(1.0, slow.coeffs.cwiseAbs().maxCoeff());
    a.worst = {a.maxError, {{"A", jsonFromMatrix(A)}, {"beta", toJson(beta)}}};
    if (a.maxError > 1e-10) a.failures = 1;
    return a;
  };
  return runSweep("pullback-oracle", trials, workers, perTrial, -1e-30, 1e-10);
}

}  // namespace

SuiteReport runVerifySuite(const std::string& suite, std::int64_t trials, std::uint64_t seed,
                           int workers) {
  if (suite == "lichnerowicz") return lichnerowiczSweep(trials, seed, workers);
  if (suite == "wirtinger") return wirtingerSweep(trials, seed, workers);
  if (suite == "fibration") return fibrationSweep(trials, seed, workers);
  if (suite == "amgm") return amgmSweep(trials, seed, workers);
  if (suite == "lemma41") return lemma41Sweep(trials, seed, workers);
  if (suite == "mixed-oracle") return mixedOracleSweep(trials, seed, workers);
  if (suite == "pullback-oracle") return pullbackOracleSweep(trials, seed, workers);
  throw std::domain_error("unknown verify suite: " + suite);
}

ModelSweepReport prop53Sweep(const ModelForm& model, std::int64_t trials, std::uint64_t seed,
                             int workers) {
  auto perTrial = [&model, seed](std::int64_t i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    const Matrix A = gaussianMatrix(model.m, model.m, rng);
    const double margin = verifyProp53(model, A);
    const double rhs = model.normSq / model.m *
                       std::pow(schattenP(LinearMapData(A), model.k), model.k);
    Acc a;
    a.minMargin = margin / (1.0 + rhs);  // normalized slack
    a.worst = {-a.minMargin, {{"A", jsonFromMatrix(A)}, {"margin", margin}}};
    if (margin < -1e-9 * (1.0 + rhs)) a.failures = 1;
    return a;
  };
  const Acc acc = mapReduce(trials, workers, Acc{}, perTrial, combineAcc);
  ModelSweepReport report;
  report.trials = trials;
  report.minMargin = acc.minMargin;
  report.failures = acc.failures;
  report.worstCase = acc.worst.payload;
  return report;
}

nlohmann::json jsonFromMatrix(const Matrix& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrixFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::domain_error("matrixFromJson: expected a 2-D array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix A(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
      throw std::domain_error("matrixFromJson: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) A(r, c) = j.at(r).at(c).get<double>();
  }
  return A;
}

}  // namespace calibra
