#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sim/rigid_body.hpp"
#include "sim/sensors.hpp"

namespace tiltobs
{

enum class AnchorSource
{
  Zmp, ///< center of pressure of all touching points
  Feet ///< vertical-force interpolation between the two foot centers
};

std::string toString(AnchorSource source);
AnchorSource anchorSourceFromString(const std::string & name);

struct Scenario
{
  std::string name = "standard";
  BodyModel body;
  ContactModel contact = ContactModel::biped();
  ImuMount imu;
  std::vector<PushEvent> pushes = standardPushes();
  ImuNoiseModel noise;
  Gains gains;
  double g0 = 9.81;
  double duration = 20.0; ///< [s]
  double dtSim = 1e-5; ///< [s]
  double dtControl = 1e-3; ///< [s], multiple of dtSim
  double initialErrorAngle = 0.2; ///< [rad]
  Vector3 initialErrorAxis = Vector3::UnitX(); ///< IMU frame
  double initialYaw = 0.0; ///< [rad]
  std::optional<RigidBodyState> initialState; ///< default: resting on both feet
  AnchorSource anchorSource = AnchorSource::Zmp;
  double anchorVelocityCutoffHz = 50.0;
  double logCadenceHz = 100.0;

  /// 100 N at 4 s and 300 N at 14 s along world x, 0.1 s each.
  static std::vector<PushEvent> standardPushes();

  void validate() const;

  /// Control ticks per run and simulation steps per control tick.
  std::size_t controlTicks() const;
  std::size_t substeps() const;

  /// Body resting on its feet at static equilibrium, or initialState.
  RigidBodyState startState() const;

  /// Text form of every field, floats in hex; input of hash().
  std::string canonical() const;

  /// FNV-1a of canonical().
  std::uint64_t hash() const;
};

/// Everything the estimators and the bookkeeping see at one control tick.
struct ControlTick
{
  std::size_t index = 0;
  double t = 0.0;
  ImuTruth truth;
  ImuSample imu;
  Vector3 yv = Vector3::Zero();
  EncoderReading encoder;
  AnchorState anchor;
  bool inFlight = false;
  const RigidBodyState * body = nullptr;
  const ContactForces * contacts = nullptr;
};

/// Simulates the scenario and calls onTick at every control tick with the
/// measurements at the start of the tick. Throws Diverged on blow-up.
void simulateMeasurements(const Scenario & s, const std::function<void(const ControlTick &)> & onTick);

/// Tilt guess at t = 0: the true tilt turned by initialErrorAngle about
/// initialErrorAxis.
UnitVector3 initialTiltGuess(const Scenario & s, const Vector3 & trueTilt);

/// Angle between two directions, robust near 0 and pi.
double angleBetween(const Vector3 & a, const Vector3 & b);

struct TrajectoryRow
{
  double t = 0.0;
  Vector3 x2True;
  Vector3 yg;
  Vector3 ya;
  Vector3 yv;
  Vector3 x1Hat;
  Vector3 x2pHat;
  Vector3 x2Hat;
  double errAngle = 0.0;
  double lyapunovV = 0.0;
};

/// Per-tick series kept at the full control rate next to the logged rows.
struct TickSeries
{
  std::vector<double> t;
  std::vector<double> errAngle;
  std::vector<double> lyapunovV;
  std::vector<double> velocityError; ///< |y_v - x1| [m/s]
  std::vector<double> x2HatNormDeviation; ///< | |x2Hat| - 1 |
  std::vector<double> x2pHatNormDeviation; ///< | |x2pHat| - 1 |
  std::vector<std::uint8_t> inFlight;
};

struct TrajectoryLog
{
  std::string version;
  std::string scenarioName;
  std::uint64_t scenarioHash = 0;
  Gains gains;
  std::uint64_t seed = 0;
  std::vector<TrajectoryRow> rows;
  TickSeries ticks;

  static const std::vector<std::string> & columns();

  /// One comment line with the header fields, one line of column names,
  /// then the rows.
  void writeCsv(std::ostream & os) const;
  std::string headerLine() const;
};

/// Standard closed-loop run of one estimator over the scenario.
TrajectoryLog runScenario(const Scenario & s, TiltObserver::Mode mode = TiltObserver::Mode::Full);

const char * libraryVersion();

} // namespace tiltobs
