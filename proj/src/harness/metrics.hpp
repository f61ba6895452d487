#pragma once

#include <optional>

#include "sim/scenario.hpp"

namespace tiltobs
{

/// Settled-behaviour window of the standard scenario: after the initial
/// transient, before the first push.
struct TimeWindow
{
  double begin = 2.0;
  double end = 4.0;
};

inline constexpr double kConvergenceThreshold = 0.01; ///< [rad]

struct ScenarioMetrics
{
  double preEventEnd = 0.0; ///< first push start or the run duration
  std::optional<double> convergenceTime; ///< error stays below the threshold from here to preEventEnd
  std::optional<double> postConvergenceRms; ///< RMS error over [convergenceTime, preEventEnd)
  double windowMeanError = 0.0; ///< over TimeWindow
  double windowErrorSd = 0.0;
  std::optional<double> measuredRate; ///< decay rate of the error angle before the first push [1/s]
  std::size_t lyapunovIncreases = 0; ///< ticks before preEventEnd where V grew
  std::optional<double> firstPushBump; ///< max excess error over the first push response, see computeMetrics
  std::optional<double> fallMaxError; ///< max error from the last push to the end
  double maxError = 0.0;
  double maxVelocityError = 0.0;
  double maxX2HatNormDeviation = 0.0;
  double maxX2pHatNormDeviation = 0.0;
  std::size_t flightTicks = 0;
};

/// With noPush (same scenario and seed, pushes removed) the first-push bump is
/// max(err - err_noPush) between the first and second push; otherwise it is
/// the error rise above its value at the push onset, which reads zero while
/// the initial transient is still decaying faster than the push disturbs it.
ScenarioMetrics computeMetrics(const TrajectoryLog & log,
                               const Scenario & s,
                               TimeWindow window = {},
                               const TrajectoryLog * noPush = nullptr);

/// Mean and population standard deviation of series[i] for t[i] in [begin, end).
/// Throws InvalidArgument when the window holds no samples.
struct WindowStats
{
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

WindowStats windowStats(const std::vector<double> & t, const std::vector<double> & series, TimeWindow window);

/// Earliest tick from which series stays below threshold up to tEnd.
std::optional<double> settleTime(const std::vector<double> & t,
                                 const std::vector<double> & series,
                                 double threshold,
                                 double tEnd);

} // namespace tiltobs
