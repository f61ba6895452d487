#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "analysis/error_dynamics.hpp"

namespace tiltobs
{

/// Exponential decay rate [1/s] of a norm history: minus the least-squares
/// slope of log(norm) over samples with t in [tBegin, tEnd]. Samples with
/// norm below 1e-12 are excluded. Throws InvalidArgument with fewer than two
/// usable samples.
double measureConvergenceRate(std::span<const double> t,
                              std::span<const double> norms,
                              double tBegin,
                              double tEnd);

/// Uniform initial errors: z1 and z2' in balls of radius ballRadius, e_z - z2
/// uniform on the sphere outside a cap of angular radius capRadius around -e_z.
struct InitialErrorSampler
{
  double ballRadius = 5.0;
  double capRadius = 1e-3;

  ErrorState sample(std::uint64_t seed, std::uint64_t index) const;
};

struct SweepSettings
{
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  InitialErrorSampler sampler;
  double horizon = 60.0; ///< simulated seconds
  double dt = 1e-4;
  double tolerance = 1e-6; ///< converged once norm < tolerance
  unsigned threads = 0; ///< 0: hardware concurrency
};

struct SweepOutcome
{
  ErrorState initial;
  double finalNorm = 0.0;
  std::optional<double> convergenceTime;
};

struct SweepSummary
{
  std::size_t samples = 0;
  std::size_t converged = 0;
  double maxFinalNorm = 0.0;
  double slowestConvergenceTime = 0.0; ///< over converged samples
  std::size_t worstIndex = 0; ///< sample with the largest final norm
  double elapsedSeconds = 0.0;
  std::vector<SweepOutcome> outcomes;

  bool allConverged() const
  {
    return converged == samples;
  }
};

/// Integrates the error ODE from sampled initial conditions and records which
/// reach the tolerance before the horizon. Samples are independent and run
/// on worker threads; results do not depend on the thread count.
SweepSummary almostGlobalSweep(const Gains & k, GravityConstant g0, const SweepSettings & settings);

struct LyapunovSweepSettings
{
  std::size_t trajectories = 10000;
  std::uint64_t seed = 2;
  InitialErrorSampler sampler;
  double horizon = 30.0;
  double dt = 1e-4;
  double normFloor = 1e-9; ///< monotonicity is only checked above this norm
  double boundSlack = 1e-10;
  unsigned threads = 0;
};

struct LyapunovSweepSummary
{
  std::size_t trajectories = 0;
  std::uint64_t steps = 0;
  std::uint64_t increases = 0; ///< steps where V grew while norm > normFloor
  std::uint64_t boundViolations = 0; ///< points where vdot > bound + slack
  double maxVdotMinusBound = -1e300;
  double maxRelativeIncrease = 0.0;
  double elapsedSeconds = 0.0;

  bool passed() const
  {
    return increases == 0 && boundViolations == 0;
  }
};

/// Checks discrete monotonicity of V and the pointwise bound along sampled
/// noiseless error trajectories.
LyapunovSweepSummary lyapunovSweep(const Gains & k, GravityConstant g0, const LyapunovSweepSettings & settings);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
template<typename Body>
void parallelFor(std::size_t count, unsigned threads, Body && body);

} // namespace tiltobs

#include "analysis/parallel.hpp"
