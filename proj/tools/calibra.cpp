// Command-line driver: binds the verification sweeps and flat-torus
// experiments to config files and JSON/CSV reports.
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage/config error.

#include "calibra/energy.hpp"
#include "calibra/mixed.hpp"
#include "calibra/models.hpp"
#include "calibra/random.hpp"
#include "calibra/sweeps.hpp"
#include "calibra/torus.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;
using namespace calibra;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::optional<std::uint64_t> seedFlag;
  std::string configPath;
  int workers = 1;
  bool quick = false;
  bool csv = false;
  std::string output;  // empty = stdout
};

void addCommon(CLI::App* cmd, CommonOpts& o, bool withConfig) {
  auto* seed = cmd->add_option("--seed", o.seedFlag, "Master seed (default fixed)");
  (void)seed;
  if (withConfig) cmd->add_option("--config", o.configPath, "Experiment config JSON path");
  cmd->add_option("--workers", o.workers, "Worker threads (does not change results)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quick", o.quick, "10x fewer samples");
  cmd->add_flag("--csv", o.csv, "CSV output (flow traces only)");
  cmd->add_flag("--json", [](std::int64_t) {}, "JSON output (default)");
  cmd->add_option("--output", o.output, "Write the report here instead of stdout");
}

std::uint64_t resolveSeed(const CommonOpts& o, const json& config) {
  if (o.seedFlag) return *o.seedFlag;
  if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
  if (const char* env = std::getenv("CALIBRA_SEED")) return std::strtoull(env, nullptr, 10);
  return kDefaultSeed;
}

json loadConfig(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

Matrix requireMatrix(const json& config, const std::string& field, int rows, int cols) {
  if (!config.contains(field)) throw ConfigError("config." + field + ": missing");
  try {
    Matrix M = matrixFromJson(config.at(field));
    if (M.rows() != rows || M.cols() != cols)
      throw ConfigError("config." + field + ": expected " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    return M;
  } catch (const json::exception& e) {
    throw ConfigError("config." + field + ": " + e.what());
  }
}

struct TorusSetup {
  TorusMapSpec spec;
  double p = 2;
  double q = 2;
};

TorusSetup torusFromConfig(const json& config) {
  for (const char* f : {"m", "n"})
    if (!config.contains(f)) throw ConfigError(std::string("config.") + f + ": missing");
  const int m = config.at("m").get<int>();
  const int n = config.at("n").get<int>();
  if (m < 1 || n < 1) throw ConfigError("config.m/n: must be positive");
  const int gridN = config.value("gridN", 64);
  TorusSetup s;
  try {
    s.spec = TorusMapSpec(m, n, requireMatrix(config, "G", m, m), requireMatrix(config, "H", n, n),
                          requireMatrix(config, "Q", n, m), gridN);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  s.p = config.value("p", 2.0);
  s.q = config.value("q", 2.0);
  return s;
}

std::string isoNow() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

int emitReport(const CommonOpts& o, const std::string& command, json config, json results,
               bool pass, std::chrono::steady_clock::time_point t0, const std::string& startedAt,
               const std::string& csvBody = {}) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::string body;
  if (o.csv) {
    if (csvBody.empty()) throw ConfigError("--csv: no time series for command " + command);
    body = csvBody;
  } else {
    const json report = {{"command", command}, {"config", std::move(config)},
                         {"startedAt", startedAt}, {"durationMs", ms},
                         {"results", std::move(results)}, {"pass", pass}};
    body = report.dump(2) + "\n";
  }
  if (o.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(o.output);
    if (!out) throw ConfigError("--output: cannot write " + o.output);
    out << body;
  }
  return pass ? 0 : 1;
}

std::int64_t scaled(std::int64_t full, bool quick) { return quick ? std::max<std::int64_t>(1, full / 10) : full; }

// The five local models exercised everywhere below.
std::vector<ModelForm> allModels() {
  return {buildModel(ModelTag::Kahler, 2), buildModel(ModelTag::Kahler, 3),
          buildModel(ModelTag::Quaternionic, 2), buildModel(ModelTag::G2),
          buildModel(ModelTag::Spin7)};
}

std::string modelLabel(const ModelForm& m) {
  std::string s = toString(m.tag);
  if (m.tag == ModelTag::Kahler || m.tag == ModelTag::Quaternionic)
    s += "(" + std::to_string(m.q) + ")";
  return s;
}

json runModels(const ModelForm& model, std::int64_t samples, std::int64_t trials,
               std::uint64_t seed, int workers, bool& pass) {
  const IotaReport iota = checkIotaConstancy(model, static_cast<int>(samples), 1e-9, seed);
  const ModelSweepReport sweep = prop53Sweep(model, trials, seed, workers);
  // exact equality cases: nonnegative multiples of the identity
  double equalityResidual = 0;
  for (double lam : {0.0, 0.5, 1.0, 3.0}) {
    const Matrix A = lam * Matrix::Identity(model.m, model.m);
    const auto [lhs, rhs] = sigmaKKCalibrationValue(model, A);
    equalityResidual = std::max(equalityResidual, std::abs(lhs - rhs));
  }
  pass = iota.constantWithinTol && sweep.failures == 0 && equalityResidual <= 1e-9;
  return {{"tag", modelLabel(model)},   {"m", model.m},
          {"k", model.k},               {"normSq", model.normSq},
          {"iotaConstSq", model.iotaConstSq}, {"samples", iota.samples},
          {"maxDeviation", iota.maxDeviation}, {"trials", sweep.trials},
          {"minMargin", sweep.minMargin}, {"equalityResidual", equalityResidual},
          {"failures", sweep.failures}};
}

json suiteReportJson(const SuiteReport& r) {
  return {{"suite", r.suite},        {"trials", r.trials}, {"minMargin", r.minMargin},
          {"maxError", r.maxError},  {"failures", r.failures}, {"pass", r.pass},
          {"worstCase", r.worstCase}};
}

json flowJson(const FlowTrace& t, bool includeHistory) {
  json j = {{"iterations", t.iterations},
            {"finalEnergy", t.finalEnergy},
            {"targetEnergy", t.targetEnergy},
            {"gradientInfNorm", t.gradientInfNorm},
            {"supDeviationFromMean", t.supDeviationFromMean},
            {"converged", t.converged}};
  if (includeHistory) j["energyHistory"] = t.energyHistory;
  return j;
}

json intersectionJson(const IntersectionReport& r) {
  return {{"samples", r.samples},
          {"iF", r.iF},
          {"jF", r.jF},
          {"closedFormJF", r.closedFormJF},
          {"jFStdError", r.jFStdError},
          {"e2", r.e2},
          {"liouvilleMass", r.liouvilleMass},
          {"sphereVolume", r.sphereVolume},
          {"withinFourSigma", r.withinFourSigma},
          {"crokeFathiHolds", r.crokeFathiHolds},
          {"cauchySchwarzHolds", r.cauchySchwarzHolds}};
}

json boundJson(const CohomologyBoundReport& r) {
  return {{"k", r.k},
          {"bound", r.bound},
          {"linearEnergy", r.linearEnergy},
          {"ratio", r.ratio},
          {"gramMinEigenvalue", r.gramMinEigenvalue},
          {"compoundNorm", r.compoundNorm}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calibra: numerical checks of calibrated-map inequalities and flat-torus experiments"};
  app.require_subcommand(1);

  std::string tag = "g2";
  int qBlocks = 2;
  std::int64_t samples = 100000;
  std::int64_t trials = 10000;
  std::string suite = "amgm";
  int boundK = 1;
  CommonOpts o;

  auto* cModels = app.add_subcommand("models", "Interior-product constancy and the pointwise calibration sweep of a local model");
  cModels->add_option("--tag", tag, "kahler | quaternionic | g2 | spin7")->required();
  cModels->add_option("--q", qBlocks, "Block count for kahler/quaternionic");
  cModels->add_option("--samples", samples, "Unit-vector samples");
  cModels->add_option("--trials", trials, "Gaussian sweep trials");
  addCommon(cModels, o, false);

  auto* cVerify = app.add_subcommand("verify", "Randomized inequality / identity sweep");
  cVerify->add_option("--suite", suite,
                      "lichnerowicz | wirtinger | fibration | amgm | lemma41 | mixed-oracle | pullback-oracle")
      ->required();
  cVerify->add_option("--trials", trials, "Sweep trials");
  addCommon(cVerify, o, false);

  auto* cMin = app.add_subcommand("torus-min", "Gradient descent on a flat-torus homotopy class");
  addCommon(cMin, o, true);
  cMin->get_option("--config")->required();

  auto* cInv = app.add_subcommand("torus-invariance", "Quadrature invariance of the calibration integrand");
  cInv->add_option("--trials", trials, "Random perturbations");
  addCommon(cInv, o, true);
  cInv->get_option("--config")->required();

  auto* cBound = app.add_subcommand("bound", "Degree-k cohomological lower bound for E_k");
  cBound->add_option("--k", boundK, "Cohomology degree");
  addCommon(cBound, o, true);
  cBound->get_option("--config")->required();

  auto* cInter = app.add_subcommand("intersection", "Monte-Carlo intersection invariants");
  cInter->add_option("--samples", samples, "Monte-Carlo samples");
  addCommon(cInter, o, true);
  cInter->get_option("--config")->required();

  auto* cAll = app.add_subcommand("suite-all", "Every acceptance sweep in sequence");
  addCommon(cAll, o, false);

  // defaults differ per command; track whether the user set them
  trials = -1;
  samples = -1;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::string startedAt = isoNow();

  try {
    const json config = loadConfig(o.configPath);
    const std::uint64_t seed = resolveSeed(o, config);

    if (cModels->parsed()) {
      if (samples < 0) samples = 100000;
      if (trials < 0) trials = 10000;
      const ModelForm model = buildModel(modelTagFromString(tag), qBlocks);
      bool pass = false;
      json results = runModels(model, scaled(samples, o.quick), scaled(trials, o.quick), seed,
                               o.workers, pass);
      json echo = {{"tag", tag}, {"q", qBlocks}, {"samples", samples}, {"trials", trials}, {"seed", seed}};
      return emitReport(o, "models", echo, results, pass, t0, startedAt);
    }

    if (cVerify->parsed()) {
      if (trials < 0) trials = 100000;
      const SuiteReport r = runVerifySuite(suite, scaled(trials, o.quick), seed, o.workers);
      json echo = {{"suite", suite}, {"trials", trials}, {"seed", seed}};
      return emitReport(o, "verify", echo, suiteReportJson(r), r.pass, t0, startedAt);
    }

    if (cMin->parsed()) {
      TorusSetup s = torusFromConfig(config);
      s.spec.perturbation =
          randomBandlimitedField(s.spec.m, s.spec.n, s.spec.gridN, 0.1, seed);
      const FlowTrace trace = minimizeEnergy(s.spec, s.p, s.q);
      const bool dirichlet = s.p == 2.0 && s.q == 2.0;
      bool pass = trace.converged;
      if (dirichlet)
        pass = pass &&
               std::abs(trace.finalEnergy - trace.targetEnergy) <=
                   0.005 * std::abs(trace.targetEnergy) &&
               trace.supDeviationFromMean <= 1e-3;
      std::string csvBody = "iteration,energy\n";
      for (std::size_t i = 0; i < trace.energyHistory.size(); ++i)
        csvBody += std::to_string(i) + "," + std::to_string(trace.energyHistory[i]) + "\n";
      json echo = config;
      echo["seed"] = seed;
      return emitReport(o, "torus-min", echo, flowJson(trace, true), pass, t0, startedAt, csvBody);
    }

    if (cInv->parsed()) {
      if (trials < 0) trials = 100;
      TorusSetup s = torusFromConfig(config);
      const InvarianceReport r =
          homotopyInvarianceCheck(s.spec, static_cast<int>(scaled(trials, o.quick)), seed);
      json echo = config;
      echo["seed"] = seed;
      echo["trials"] = trials;
      json results = {{"trials", r.trials}, {"target", r.target}, {"maxSpread", r.maxSpread},
                      {"pass", r.pass}};
      return emitReport(o, "torus-invariance", echo, results, r.pass, t0, startedAt);
    }

    if (cBound->parsed()) {
      TorusSetup s = torusFromConfig(config);
      const CohomologyBoundReport r = cohomologyBound(s.spec, boundK);
      const bool pass = r.bound >= 0 && (r.compoundNorm <= 0 || r.bound > 0) &&
                        r.bound <= r.linearEnergy * (1 + 1e-12);
      json echo = config;
      echo["seed"] = seed;
      echo["k"] = boundK;
      return emitReport(o, "bound", echo, boundJson(r), pass, t0, startedAt);
    }

    if (cInter->parsed()) {
      if (samples < 0) samples = 1000000;
      TorusSetup s = torusFromConfig(config);
      const IntersectionReport r =
          intersectionEstimate(s.spec, scaled(samples, o.quick), seed, o.workers);
      const bool pass = r.withinFourSigma && r.crokeFathiHolds && r.cauchySchwarzHolds;
      json echo = config;
      echo["seed"] = seed;
      echo["samples"] = samples;
      return emitReport(o, "intersection", echo, intersectionJson(r), pass, t0, startedAt);
    }

    // suite-all
    json results = json::array();
    bool allPass = true;
    auto record = [&](const std::string& name, bool pass, json payload) {
      payload["name"] = name;
      payload["pass"] = pass;
      results.push_back(std::move(payload));
      allPass = allPass && pass;
    };

    for (const ModelForm& model : allModels()) {
      bool pass = false;
      json r = runModels(model, scaled(10000, o.quick), scaled(100000, o.quick), seed, o.workers,
                         pass);
      record("models/" + modelLabel(model), pass, std::move(r));
    }
    {
      // Kaehler equality cases at lambda * unitary
      const ModelForm model = buildModel(ModelTag::Kahler, 2);
      auto rng = substream(seed, 0x6b61686cULL);
      double worst = 0;
      const std::int64_t reps = scaled(1000, o.quick);
      for (std::int64_t t = 0; t < reps; ++t) {
        std::uniform_real_distribution<double> lam(0.0, 3.0);
        const Matrix A = lam(rng) * randomUnitaryEmbedded(model.q, rng);
        const auto [lhs, rhs] = sigmaKKCalibrationValue(model, A);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      record("models/kahler-unitary-equality", worst <= 1e-9,
             {{"trials", reps}, {"maxResidual", worst}});
    }
    for (const char* s : {"lichnerowicz", "wirtinger", "fibration", "amgm", "lemma41"}) {
      const SuiteReport r = runVerifySuite(s, scaled(100000, o.quick), seed, o.workers);
      record(std::string("verify/") + s, r.pass, suiteReportJson(r));
    }
    for (const char* s : {"mixed-oracle", "pullback-oracle"}) {
      const SuiteReport r = runVerifySuite(s, scaled(10000, o.quick), seed, o.workers);
      record(std::string("verify/") + s, r.pass, suiteReportJson(r));
    }
    {
      // random T^2 -> T^2 classes: descent hits the closed-form minimum,
      // quadrature is homotopy invariant, and the degree-k bound is honored
      const int instances = 5;
      auto rng = substream(seed, 0x746f7275ULL);
      for (int inst = 0; inst < instances; ++inst) {
        Matrix Q(2, 2);
        std::uniform_int_distribution<int> qDist(-2, 2);
        do {
          for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) Q(r, c) = qDist(rng);
        } while (Q.cwiseAbs().maxCoeff() == 0);
        TorusMapSpec spec(2, 2, randomSpd(2, rng), randomSpd(2, rng), Q, 64);
        spec.perturbation = randomBandlimitedField(2, 2, 64, 0.1, splitmix64(seed + inst));
        const FlowTrace trace = minimizeEnergy(spec, 2, 2);
        const bool okMin =
            trace.converged &&
            std::abs(trace.finalEnergy - trace.targetEnergy) <= 0.005 * std::abs(trace.targetEnergy) &&
            trace.supDeviationFromMean <= 1e-3;
        record("torus-min/instance-" + std::to_string(inst), okMin, flowJson(trace, false));
        const InvarianceReport inv =
            homotopyInvarianceCheck(spec, static_cast<int>(scaled(100, o.quick)), seed);
        record("torus-invariance/instance-" + std::to_string(inst), inv.pass,
               {{"target", inv.target}, {"maxSpread", inv.maxSpread}});
        for (int k : {1, 2}) {
          const CohomologyBoundReport b = cohomologyBound(spec, k);
          const bool okBound = b.bound >= 0 && (b.compoundNorm <= 0 || b.bound > 0) &&
                               b.bound <= trace.finalEnergy * (1 + 1e-12);
          json bj = boundJson(b);
          bj["measuredMinEnergy"] = trace.finalEnergy;
          record("bound/instance-" + std::to_string(inst) + "-k" + std::to_string(k), okBound,
                 std::move(bj));
        }
      }
    }
    {
      auto rng = substream(seed, 0x696e7472ULL);
      const std::vector<std::pair<int, int>> shapes = {{1, 1}, {2, 2}, {3, 2}};
      for (auto [m, n] : shapes) {
        Matrix Q(n, m);
        std::uniform_int_distribution<int> qDist(-2, 2);
        do {
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c) Q(r, c) = qDist(rng);
        } while (Q.cwiseAbs().maxCoeff() == 0);
        TorusMapSpec spec(m, n, randomSpd(m, rng), randomSpd(n, rng), Q, 16);
        const IntersectionReport r =
            intersectionEstimate(spec, scaled(1000000, o.quick), seed, o.workers);
        record("intersection/" + std::to_string(m) + "x" + std::to_string(n),
               r.withinFourSigma && r.crokeFathiHolds && r.cauchySchwarzHolds,
               intersectionJson(r));
      }
    }
    {
      // 1-D class with a non-affine exactly-calibrated representative
      TorusMapSpec spec(1, 1, Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                        Matrix::Identity(1, 1), 1000);
      spec.perturbation.resize(spec.gridPoints(), 1);
      const double twoPi = 2.0 * M_PI;
      for (std::int64_t i = 0; i < spec.gridPoints(); ++i) {
        const double x = (i + 0.5) / spec.gridN;
        spec.perturbation(i, 0) = std::sin(twoPi * x) / twoPi;
      }
      const double energy = energyQuadrature(spec, 1, 1);
      double pointwiseResidual = 0;
      const double pNorm = std::sqrt(pNormSquared(spec));
      for (std::int64_t i = 0; i < spec.gridPoints(); ++i) {
        const Matrix A = spec.differentialAt(i);
        pointwiseResidual =
            std::max(pointwiseResidual, std::abs(pairing(spec, A.transpose()) - pNorm * std::abs(A(0, 0))));
      }
      record("torus-1d/sin-counterexample",
             std::abs(energy - 1.0) <= 1e-10 && pointwiseResidual <= 1e-10,
             {{"energy", energy}, {"pointwiseResidual", pointwiseResidual}});
    }

    json echo = {{"seed", seed}, {"quick", o.quick}, {"workers", o.workers}};
    return emitReport(o, "suite-all", echo, results, allPass, t0, startedAt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
