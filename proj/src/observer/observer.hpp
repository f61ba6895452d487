#pragma once

#include "geometry/geometry.hpp"

namespace tiltobs
{

/// Observer gains. alpha1 [1/s] weights the velocity innovation, alpha2
/// [1/s^2] drives the intermediate tilt, gamma [1/s] pulls the unit tilt
/// toward the intermediate one.
struct Gains
{
  double alpha1 = 100.0;
  double alpha2 = 20.0;
  double gamma = 3.0;

  /// Throws InvalidArgument naming the first non-positive gain.
  void validate() const;

  bool operator==(const Gains &) const = default;
};

class GravityConstant
{
public:
  explicit GravityConstant(double g0 = 9.81);

  double value() const noexcept
  {
    return g0_;
  }

private:
  double g0_;
};

struct ImuSample
{
  Vector3 gyro = Vector3::Zero(); ///< y_g [rad/s], sensor frame
  Vector3 accel = Vector3::Zero(); ///< y_a [m/s^2], sensor frame
  double t = 0.0;
};

struct ObserverState
{
  Vector3 x1Hat = Vector3::Zero(); ///< sensor velocity in sensor frame
  Vector3 x2PrimeHat = Vector3::UnitZ(); ///< intermediate tilt, free norm
  UnitVector3 x2Hat; ///< tilt estimate on the sphere
};

struct ObserverDerivative
{
  Vector3 dx1;
  Vector3 dx2Prime;
  Vector3 dx2;
};

/// First stage only: (x1Hat, x2PrimeHat).
struct IntermediateState
{
  Vector3 x1Hat = Vector3::Zero();
  Vector3 x2PrimeHat = Vector3::UnitZ();
};

/// Continuous-time right-hand side of the two-stage observer.
ObserverDerivative observerDerivative(const ObserverState & s,
                                      const Vector3 & yv,
                                      const Vector3 & yg,
                                      const Vector3 & ya,
                                      const Gains & k,
                                      GravityConstant g0);

/// One discrete update: Euler for x1Hat and x2PrimeHat, sphereStep for x2Hat.
/// Throws NonFinite naming the offending input.
ObserverState observerStep(const ObserverState & s,
                           const ImuSample & imu,
                           const Vector3 & yv,
                           const Gains & k,
                           GravityConstant g0,
                           double dt);

/// The first two lines of the observer, stepped on their own. x2PrimeHat is
/// never renormalized.
IntermediateState intermediateEstimatorStep(const IntermediateState & s,
                                            const ImuSample & imu,
                                            const Vector3 & yv,
                                            double alpha1,
                                            double alpha2,
                                            GravityConstant g0,
                                            double dt);

/// x1Hat := yv0, x2PrimeHat := x2Hat := tiltGuess.
ObserverState initialObserverState(const Vector3 & yv0, const UnitVector3 & tiltGuess = UnitVector3());

/// Explicit Euler on the velocity line is stable only for dt < 2 / alpha1.
/// Throws InvalidArgument otherwise.
void checkEulerStability(const Gains & k, double dt);

/// Full attitude from a tilt estimate and a reference heading. The tilt is
/// preserved exactly: R^T e_z == tilt. The secondary TRIAD pair uses the body
/// x axis as a virtual magnetometer that reads the world direction
/// Rz(yaw) e_x, so the returned rotation has yaw() == yaw.
/// Throws Degenerate when tilt is (anti)parallel to the body x axis.
Rotation triadFuse(const UnitVector3 & tilt, double yaw);

/// Stateful wrapper around observerStep for streaming use.
class TiltObserver
{
public:
  enum class Mode
  {
    Full,
    Intermediate
  };

  TiltObserver(const Gains & gains, GravityConstant g0, Mode mode = Mode::Full);

  void reset(const Vector3 & yv0, const UnitVector3 & tiltGuess = UnitVector3());

  /// Advances by dt using the measurements at the start of the interval.
  void update(const ImuSample & imu, const Vector3 & yv, double dt);

  const ObserverState & state() const noexcept
  {
    return state_;
  }

  Mode mode() const noexcept
  {
    return mode_;
  }

  const Gains & gains() const noexcept
  {
    return gains_;
  }

  /// x2Hat in Full mode. In Intermediate mode the normalized x2PrimeHat,
  /// which throws Degenerate if the intermediate estimate passes through 0.
  UnitVector3 tiltEstimate() const;

private:
  Gains gains_;
  GravityConstant g0_;
  Mode mode_;
  ObserverState state_;
};

} // namespace tiltobs
