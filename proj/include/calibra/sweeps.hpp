#pragma once

// Randomized verification suites shared by the CLI and the acceptance
// binary. Each suite draws per-trial substreams so results do not
// depend on the worker count.

#include "calibra/models.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace calibra {

struct SuiteReport {
  std::string suite;
  std::int64_t trials = 0;
  double minMargin = 0;  // inequality suites: worst slack observed
  double maxError = 0;   // identity suites: worst relative error
  std::int64_t failures = 0;
  bool pass = false;
  nlohmann::json worstCase;
};

/// suite in {lichnerowicz, wirtinger, fibration, amgm, lemma41,
/// mixed-oracle, pullback-oracle}.
SuiteReport runVerifySuite(const std::string& suite, std::int64_t trials, std::uint64_t seed,
                           int workers = 1);

struct ModelSweepReport {
  std::int64_t trials = 0;
  double minMargin = 0;  // min of rhs - lhs, relative to 1 + rhs
  std::int64_t failures = 0;
  nlohmann::json worstCase;
};

/// Random Gaussian matrices against the pointwise sigma_{k,k}
/// calibration inequality of the model.
ModelSweepReport prop53Sweep(const ModelForm& model, std::int64_t trials, std::uint64_t seed,
                             int workers = 1);

nlohmann::json jsonFromMatrix(const Matrix& A);
Matrix matrixFromJson(const nlohmann::json& j);

}  // namespace calibra
