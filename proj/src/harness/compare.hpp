#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "harness/metrics.hpp"

namespace tiltobs
{

inline constexpr double kNormalityTolerance = 1e-9;
inline constexpr double kMeasurableDeviation = 1e-3;

/// Full observer and intermediate estimator fed tick by tick from one
/// simulated measurement stream.
struct ComparisonReport
{
  std::vector<double> t;
  std::vector<double> fullError; ///< angle(x2Hat, x2) [rad]
  std::vector<double> intermediateError; ///< angle(x2pHat, x2) [rad]
  std::vector<double> x2HatNorm;
  std::vector<double> x2pHatNorm;

  TimeWindow window;
  WindowStats full;
  WindowStats intermediate;
  double maxX2HatNormDeviation = 0.0;
  double maxX2pHatNormDeviation = 0.0;
  std::uint64_t fullStreamDigest = 0; ///< FNV-1a of every measurement the estimator consumed
  std::uint64_t intermediateStreamDigest = 0;

  bool fullSdNotWorse() const
  {
    return full.sd <= intermediate.sd;
  }

  bool normalityHeld() const
  {
    return maxX2HatNormDeviation <= kNormalityTolerance;
  }

  bool intermediateDeviates() const
  {
    return maxX2pHatNormDeviation > kMeasurableDeviation;
  }

  bool streamsIdentical() const
  {
    return fullStreamDigest == intermediateStreamDigest;
  }

  bool passed() const
  {
    return fullSdNotWorse() && normalityHeld() && intermediateDeviates() && streamsIdentical();
  }

  /// Columns t, err_full_rad, err_intermediate_rad, x2hat_norm, x2phat_norm
  /// at the given row stride.
  void writeCsv(std::ostream & os, std::size_t stride = 1) const;
};

ComparisonReport compareEstimators(const Scenario & s, TimeWindow window = {});

} // namespace tiltobs
