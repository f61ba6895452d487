#pragma once

#include <string>

#include "json.hpp"

#include "analysis/linearization.hpp"
#include "harness/config.hpp"
#include "harness/metrics.hpp"

namespace tiltobs
{

using Json = nlohmann::ordered_json;

/// Outcome of one subcommand: whether every enabled check passed and the
/// machine-readable summary that was also written to the output directory.
struct CommandResult
{
  bool passed = true;
  Json summary;
};

/// Pinned acceptance of the three linearizations.
struct EigenVerdict
{
  LinearizationReport a1;
  LinearizationReport a2;
  LinearizationReport a3;
  int a2RootsAtGamma = 0; ///< computed eigenvalues of A2 within 1e-6 of gamma
  bool a1Matches = false;
  bool a2Matches = false;
  bool a3Hurwitz = false;

  bool passed() const
  {
    return a1Matches && a2Matches && a3Hurwitz;
  }
};

inline constexpr double kEigenTolerance = 1e-8;

EigenVerdict checkEigenstructure(const Gains & k, GravityConstant g0);

Json toJson(const LinearizationReport & r);
Json toJson(const ScenarioMetrics & m);

/// Simulates the configured scenario with the full observer; writes
/// trajectory.csv and summary.json, plus any verification enabled in the
/// config.
CommandResult runCommand(const RunConfig & config, const std::string & outDir);

/// Runs the enabled verifications (all three if none is enabled); writes
/// verify.json.
CommandResult verifyCommand(const RunConfig & config, const std::string & outDir);

/// Sampled convergence of the error dynamics; writes sweep.json and sweep.csv.
CommandResult sweepCommand(const RunConfig & config, const std::string & outDir);

/// Full observer against the intermediate estimator on one measurement
/// stream; writes compare.csv and compare.json.
CommandResult compareCommand(const RunConfig & config, const std::string & outDir);

} // namespace tiltobs
