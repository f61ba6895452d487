#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "analysis/convergence.hpp"
#include "sim/scenario.hpp"

namespace tiltobs
{

/// Foot and landing-point layout from which the contact points are built.
struct ContactGeometry
{
  double comHeight = 0.75; ///< soles below the COM [m]
  double footHalfLength = 0.12;
  double footHalfWidth = 0.06;
  double footLateralOffset = 0.1;
  bool landingPoints = true;
  double bodyTop = 0.65; ///< height of the landing points above the COM [m]

  bool operator==(const ContactGeometry &) const = default;
};

struct PushConfig
{
  double tStart = 0.0;
  double duration = 0.1;
  Vector3 force = Vector3::Zero();
  Vector3 point = Vector3(0.0, 0.0, 0.35);

  bool operator==(const PushConfig &) const = default;
};

struct ScenarioConfig
{
  std::string name = "standard";
  double duration = 20.0;
  double dtSim = 1e-5;
  double dtControl = 1e-3;
  double logCadenceHz = 100.0;
  double initialErrorAngle = 0.2;
  Vector3 initialErrorAxis = Vector3::UnitX();
  double initialYaw = 0.0;

  Gains gains;
  double g0 = 9.81;

  double mass = 42.6;
  Vector3 inertia = Vector3(6.0, 5.5, 0.8);

  double stiffness = 1e5;
  double damping = 1e3;
  double tangentialStiffness = 1e5;
  double tangentialDamping = 1e3;
  ContactGeometry geometry;

  Vector3 imuPosition = Vector3(0.0, 0.0, 0.45);
  Vector3 imuRpy = Vector3::Zero(); ///< roll, pitch, yaw of the IMU in the body [rad]
  double imuMotionAmplitude = 0.0;
  double imuMotionAngle = 0.0;
  double imuMotionFrequency = 0.0;

  double gyroSd = 0.02;
  double accelSd = 0.5;
  std::uint64_t seed = 1;

  AnchorSource anchorSource = AnchorSource::Zmp;
  double anchorVelocityCutoffHz = 50.0;

  std::vector<PushConfig> pushes = standardPushes();

  static std::vector<PushConfig> standardPushes();

  bool operator==(const ScenarioConfig &) const = default;

  /// Builds and validates the simulator scenario.
  Scenario build() const;
};

struct VerifyToggles
{
  bool lyapunov = false;
  bool eigen = false;
  bool sweep = false;

  bool any() const
  {
    return lyapunov || eigen || sweep;
  }

  bool operator==(const VerifyToggles &) const = default;
};

struct SweepConfig
{
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double horizon = 60.0;
  double dt = 1e-4;
  double tolerance = 1e-6;
  double ballRadius = 5.0;
  double capRadius = 1e-3;
  unsigned threads = 0;

  bool operator==(const SweepConfig &) const = default;

  SweepSettings settings() const;
};

struct LyapunovConfig
{
  std::size_t trajectories = 10000;
  std::uint64_t seed = 2;
  double horizon = 30.0;
  double dt = 1e-4;
  double ballRadius = 5.0;

  bool operator==(const LyapunovConfig &) const = default;

  LyapunovSweepSettings settings(unsigned threads) const;
};

struct RunConfig
{
  ScenarioConfig scenario;
  std::string outputDir = ".";
  VerifyToggles verify;
  SweepConfig sweep;
  LyapunovConfig lyapunov;

  bool operator==(const RunConfig &) const = default;

  /// Throws Config naming the violated invariant.
  void validate() const;

  /// --seed: one seed for the noise and both sampled checks.
  void overrideSeed(std::uint64_t seed);
};

/// Parses INI text. Unknown sections or keys, malformed numbers and invariant
/// violations throw Config with the section, key and, for syntax errors, line.
RunConfig parseConfig(const std::string & text, const std::string & origin = "<string>");

/// Reads and parses a file; an empty file gives every default.
RunConfig loadConfig(const std::string & path);

/// INI text listing every key; parseConfig(serializeConfig(c)) == c.
std::string serializeConfig(const RunConfig & config);

} // namespace tiltobs
