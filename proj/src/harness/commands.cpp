#include "harness/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "analysis/convergence.hpp"
#include "common/error.hpp"
#include "harness/compare.hpp"

namespace tiltobs
{

namespace
{

namespace fs = std::filesystem;

std::string hex(std::uint64_t value)
{
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

Json optionalJson(const std::optional<double> & v)
{
  return v ? Json(*v) : Json(nullptr);
}

/// JSON has no infinities; they are reported as strings.
Json number(double v)
{
  if(std::isfinite(v))
  {
    return v;
  }
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

Json complexList(const std::vector<Complex> & values)
{
  Json out = Json::array();
  for(const Complex & c : values)
  {
    out.push_back(Json::array({number(c.real()), number(c.imag())}));
  }
  return out;
}

fs::path prepareDir(const std::string & outDir)
{
  std::error_code ec;
  fs::create_directories(outDir, ec);
  if(ec)
  {
    throw Error(ErrorCode::Io, "cannot create output directory '" + outDir + "': " + ec.message());
  }
  return fs::path(outDir);
}

std::ofstream openOut(const fs::path & path)
{
  std::ofstream out(path);
  if(!out)
  {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  return out;
}

void writeJson(const fs::path & path, const Json & j)
{
  std::ofstream out = openOut(path);
  out << j.dump(2) << '\n';
}

Json header(const std::string & command, const RunConfig & config)
{
  Json j;
  j["command"] = command;
  j["version"] = libraryVersion();
  j["scenario"] = config.scenario.name;
  j["gains"] = {config.scenario.gains.alpha1, config.scenario.gains.alpha2, config.scenario.gains.gamma};
  j["g0"] = config.scenario.g0;
  return j;
}

/// Re-throws simulator failures with the scenario and seed attached.
template<typename F>
auto withScenarioContext(const Scenario & s, F && body)
{
  try
  {
    return body();
  }
  catch(const Error & e)
  {
    throw Error(e.code(), "scenario '" + s.name + "' (seed " + std::to_string(s.noise.seed) + "): " + e.what());
  }
}

Json eigenJson(const EigenVerdict & v)
{
  Json j;
  j["passed"] = v.passed();
  j["tolerance"] = kEigenTolerance;
  j["a1_matches"] = v.a1Matches;
  j["a2_matches"] = v.a2Matches;
  j["a2_roots_at_gamma"] = v.a2RootsAtGamma;
  j["a3_hurwitz"] = v.a3Hurwitz;
  j["reports"] = Json::array({toJson(v.a1), toJson(v.a2), toJson(v.a3)});
  return j;
}

Json lyapunovJson(const LyapunovSweepSummary & s, const LyapunovConfig & c)
{
  Json j;
  j["passed"] = s.passed();
  j["trajectories"] = s.trajectories;
  j["seed"] = c.seed;
  j["horizon_s"] = c.horizon;
  j["dt"] = c.dt;
  j["steps"] = s.steps;
  j["increases"] = s.increases;
  j["bound_violations"] = s.boundViolations;
  j["max_vdot_minus_bound"] = number(s.maxVdotMinusBound);
  j["max_relative_increase"] = number(s.maxRelativeIncrease);
  j["elapsed_s"] = s.elapsedSeconds;
  return j;
}

Json sweepJson(const SweepSummary & s, const SweepConfig & c)
{
  Json j;
  j["passed"] = s.allConverged();
  j["samples"] = s.samples;
  j["converged"] = s.converged;
  j["failures"] = s.samples - s.converged;
  j["seed"] = c.seed;
  j["horizon_s"] = c.horizon;
  j["dt"] = c.dt;
  j["tolerance"] = c.tolerance;
  j["ball_radius"] = c.ballRadius;
  j["cap_radius"] = c.capRadius;
  j["max_final_norm"] = number(s.maxFinalNorm);
  j["worst_index"] = s.worstIndex;
  j["slowest_convergence_time_s"] = s.converged ? Json(s.slowestConvergenceTime) : Json(nullptr);
  j["elapsed_s"] = s.elapsedSeconds;
  return j;
}

Json runVerifications(const RunConfig & config, VerifyToggles toggles, bool & passed)
{
  const GravityConstant g0(config.scenario.g0);
  const Gains & k = config.scenario.gains;
  Json j = Json::object();
  if(toggles.eigen)
  {
    const EigenVerdict v = checkEigenstructure(k, g0);
    passed = passed && v.passed();
    j["eigen"] = eigenJson(v);
  }
  if(toggles.lyapunov)
  {
    const LyapunovSweepSummary s = lyapunovSweep(k, g0, config.lyapunov.settings(config.sweep.threads));
    passed = passed && s.passed();
    j["lyapunov"] = lyapunovJson(s, config.lyapunov);
  }
  if(toggles.sweep)
  {
    const SweepSummary s = almostGlobalSweep(k, g0, config.sweep.settings());
    passed = passed && s.allConverged();
    j["sweep"] = sweepJson(s, config.sweep);
  }
  return j;
}

} // namespace

EigenVerdict checkEigenstructure(const Gains & k, GravityConstant g0)
{
  EigenVerdict v;
  v.a1 = analyzeLinearization(LinearizationId::A1, k, g0);
  v.a2 = analyzeLinearization(LinearizationId::A2, k, g0);
  v.a3 = analyzeLinearization(LinearizationId::A3, k, g0);
  for(const Complex & l : v.a2.eigenvalues)
  {
    v.a2RootsAtGamma += std::abs(l - Complex(k.gamma, 0.0)) < 1e-6 ? 1 : 0;
  }
  v.a1Matches = v.a1.eigenvalueMatchError < kEigenTolerance;
  v.a2Matches = v.a2.eigenvalueMatchError < kEigenTolerance && v.a2RootsAtGamma == 2;
  v.a3Hurwitz = v.a3.isHurwitz && v.a3.eigenvalueMatchError < kEigenTolerance;
  return v;
}

Json toJson(const LinearizationReport & r)
{
  Json j;
  j["id"] = toString(r.id);
  j["is_hurwitz"] = r.isHurwitz;
  j["slowest_real_part"] = number(r.slowestRealPart);
  j["eigenvalue_match_error"] = number(r.eigenvalueMatchError);
  j["characteristic_polynomial_residual"] = number(r.characteristicPolynomialResidual);
  j["eigenvalues"] = complexList(r.eigenvalues);
  j["expected_eigenvalues"] = complexList(r.expectedEigenvalues);
  return j;
}

Json toJson(const ScenarioMetrics & m)
{
  Json j;
  j["convergence_threshold_rad"] = kConvergenceThreshold;
  j["convergence_time_s"] = optionalJson(m.convergenceTime);
  j["post_convergence_rms_rad"] = optionalJson(m.postConvergenceRms);
  j["window_mean_error_rad"] = m.windowMeanError;
  j["window_error_sd_rad"] = m.windowErrorSd;
  j["measured_rate_per_s"] = optionalJson(m.measuredRate);
  j["lyapunov_increases"] = m.lyapunovIncreases;
  j["first_push_bump_rad"] = optionalJson(m.firstPushBump);
  j["fall_max_error_rad"] = optionalJson(m.fallMaxError);
  j["max_error_rad"] = m.maxError;
  j["max_velocity_error_mps"] = m.maxVelocityError;
  j["max_x2hat_norm_deviation"] = m.maxX2HatNormDeviation;
  j["max_x2phat_norm_deviation"] = m.maxX2pHatNormDeviation;
  j["flight_ticks"] = m.flightTicks;
  j["pre_event_end_s"] = m.preEventEnd;
  return j;
}

CommandResult runCommand(const RunConfig & config, const std::string & outDir)
{
  config.validate();
  const Scenario s = config.scenario.build();
  const fs::path dir = prepareDir(outDir);
  const auto start = std::chrono::steady_clock::now();
  const TrajectoryLog log = withScenarioContext(s, [&] { return runScenario(s); });
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::ofstream out = openOut(dir / "trajectory.csv");
    log.writeCsv(out);
  }

  CommandResult result;
  Json & j = result.summary;
  j = header("run", config);
  j["scenario_hash"] = hex(log.scenarioHash);
  j["seed"] = s.noise.seed;
  j["rows"] = log.rows.size();
  j["elapsed_s"] = elapsed;
  std::optional<TrajectoryLog> reference;
  if(!s.pushes.empty())
  {
    Scenario quiet = s;
    quiet.pushes.clear();
    reference = withScenarioContext(quiet, [&] { return runScenario(quiet); });
  }
  j["metrics"] = toJson(computeMetrics(log, s, {}, reference ? &*reference : nullptr));
  if(config.verify.any())
  {
    j["verification"] = runVerifications(config, config.verify, result.passed);
  }
  j["passed"] = result.passed;
  j["files"] = {"trajectory.csv", "summary.json"};
  writeJson(dir / "summary.json", j);
  return result;
}

CommandResult verifyCommand(const RunConfig & config, const std::string & outDir)
{
  config.validate();
  const fs::path dir = prepareDir(outDir);
  VerifyToggles toggles = config.verify;
  if(!toggles.any())
  {
    toggles = {true, true, true};
  }
  CommandResult result;
  Json & j = result.summary;
  j = header("verify", config);
  j["verification"] = runVerifications(config, toggles, result.passed);
  j["passed"] = result.passed;
  j["files"] = {"verify.json"};
  writeJson(dir / "verify.json", j);
  return result;
}

CommandResult sweepCommand(const RunConfig & config, const std::string & outDir)
{
  config.validate();
  const fs::path dir = prepareDir(outDir);
  const SweepSummary s =
      almostGlobalSweep(config.scenario.gains, GravityConstant(config.scenario.g0), config.sweep.settings());
  {
    std::ofstream out = openOut(dir / "sweep.csv");
    out << "index,initial_norm,initial_tilt_angle_rad,final_norm,converged,convergence_time_s\n";
    char line[200];
    for(std::size_t i = 0; i < s.outcomes.size(); ++i)
    {
      const SweepOutcome & o = s.outcomes[i];
      std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%d,%.17g\n", i, o.initial.norm(),
                    o.initial.tiltAngle(), o.finalNorm, o.convergenceTime ? 1 : 0,
                    o.convergenceTime ? *o.convergenceTime : std::nan(""));
      out << line;
    }
  }
  CommandResult result;
  result.passed = s.allConverged();
  Json & j = result.summary;
  j = header("sweep", config);
  j["sweep"] = sweepJson(s, config.sweep);
  j["passed"] = result.passed;
  j["files"] = {"sweep.csv", "sweep.json"};
  writeJson(dir / "sweep.json", j);
  return result;
}

CommandResult compareCommand(const RunConfig & config, const std::string & outDir)
{
  config.validate();
  const Scenario s = config.scenario.build();
  const fs::path dir = prepareDir(outDir);
  const ComparisonReport r = withScenarioContext(s, [&] { return compareEstimators(s); });
  {
    std::ofstream out = openOut(dir / "compare.csv");
    const auto stride = static_cast<std::size_t>(std::max(1LL, std::llround(1.0 / (s.logCadenceHz * s.dtControl))));
    r.writeCsv(out, stride);
  }
  CommandResult result;
  result.passed = r.passed();
  Json & j = result.summary;
  j = header("compare", config);
  j["scenario_hash"] = hex(s.hash());
  j["seed"] = s.noise.seed;
  j["window_s"] = {r.window.begin, r.window.end};
  j["full"] = {{"error_mean_rad", r.full.mean},
               {"error_sd_rad", r.full.sd},
               {"max_x2hat_norm_deviation", r.maxX2HatNormDeviation}};
  j["intermediate"] = {{"error_mean_rad", r.intermediate.mean},
                       {"error_sd_rad", r.intermediate.sd},
                       {"max_x2phat_norm_deviation", r.maxX2pHatNormDeviation}};
  j["full_sd_not_worse"] = r.fullSdNotWorse();
  j["normality_held"] = r.normalityHeld();
  j["intermediate_deviates"] = r.intermediateDeviates();
  j["streams_identical"] = r.streamsIdentical();
  j["stream_digest"] = hex(r.fullStreamDigest);
  j["passed"] = result.passed;
  j["files"] = {"compare.csv", "compare.json"};
  writeJson(dir / "compare.json", j);
  return result;
}

} // namespace tiltobs
