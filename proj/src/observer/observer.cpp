#include "observer/observer.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "common/error.hpp"
#include "geometry/tolerances.hpp"

namespace tiltobs
{

namespace
{

void requireFinite(const Vector3 & v, const char * field)
{
  if(!isFinite(v))
  {
    throw Error(ErrorCode::NonFinite, std::string("non-finite input: ") + field);
  }
}

void requirePositiveStep(double dt)
{
  if(!std::isfinite(dt) || !(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "time step dt must be positive and finite");
  }
}

} // namespace

void Gains::validate() const
{
  auto check = [](double value, const char * name) {
    if(!std::isfinite(value) || !(value > 0.0))
    {
      std::ostringstream msg;
      msg << "gain " << name << " must be positive (got " << value << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  };
  check(alpha1, "alpha1");
  check(alpha2, "alpha2");
  check(gamma, "gamma");
}

GravityConstant::GravityConstant(double g0) : g0_(g0)
{
  if(!std::isfinite(g0) || !(g0 > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "gravity constant g0 must be positive");
  }
}

ObserverDerivative observerDerivative(const ObserverState & s,
                                      const Vector3 & yv,
                                      const Vector3 & yg,
                                      const Vector3 & ya,
                                      const Gains & k,
                                      GravityConstant g0)
{
  const double g = g0.value();
  const Vector3 innovation = yv - s.x1Hat;
  const Vector3 & x2 = s.x2Hat.vec();

  ObserverDerivative d;
  d.dx1 = -yg.cross(s.x1Hat) - g * s.x2PrimeHat + ya + k.alpha1 * innovation;
  d.dx2Prime = -yg.cross(s.x2PrimeHat) - (k.alpha2 / g) * innovation;
  const Vector3 effectiveRate = yg - k.gamma * x2.cross(s.x2PrimeHat);
  d.dx2 = -effectiveRate.cross(x2);
  return d;
}

ObserverState observerStep(const ObserverState & s,
                           const ImuSample & imu,
                           const Vector3 & yv,
                           const Gains & k,
                           GravityConstant g0,
                           double dt)
{
  requirePositiveStep(dt);
  requireFinite(imu.gyro, "y_g");
  requireFinite(imu.accel, "y_a");
  requireFinite(yv, "y_v");
  requireFinite(s.x1Hat, "x1_hat");
  requireFinite(s.x2PrimeHat, "x2p_hat");

  const ObserverDerivative d = observerDerivative(s, yv, imu.gyro, imu.accel, k, g0);
  ObserverState next;
  next.x1Hat = s.x1Hat + dt * d.dx1;
  next.x2PrimeHat = s.x2PrimeHat + dt * d.dx2Prime;
  next.x2Hat = sphereStep(s.x2Hat, d.dx2, dt);
  return next;
}

IntermediateState intermediateEstimatorStep(const IntermediateState & s,
                                            const ImuSample & imu,
                                            const Vector3 & yv,
                                            double alpha1,
                                            double alpha2,
                                            GravityConstant g0,
                                            double dt)
{
  requirePositiveStep(dt);
  requireFinite(imu.gyro, "y_g");
  requireFinite(imu.accel, "y_a");
  requireFinite(yv, "y_v");
  requireFinite(s.x1Hat, "x1_hat");
  requireFinite(s.x2PrimeHat, "x2p_hat");

  const double g = g0.value();
  const Vector3 innovation = yv - s.x1Hat;
  const Vector3 dx1 = -imu.gyro.cross(s.x1Hat) - g * s.x2PrimeHat + imu.accel + alpha1 * innovation;
  const Vector3 dx2Prime = -imu.gyro.cross(s.x2PrimeHat) - (alpha2 / g) * innovation;

  IntermediateState next;
  next.x1Hat = s.x1Hat + dt * dx1;
  next.x2PrimeHat = s.x2PrimeHat + dt * dx2Prime;
  return next;
}

ObserverState initialObserverState(const Vector3 & yv0, const UnitVector3 & tiltGuess)
{
  ObserverState s;
  s.x1Hat = yv0;
  s.x2PrimeHat = tiltGuess.vec();
  s.x2Hat = tiltGuess;
  return s;
}

void checkEulerStability(const Gains & k, double dt)
{
  if(!(dt < 2.0 / k.alpha1))
  {
    std::ostringstream msg;
    msg << "control step " << dt << " s violates the Euler stability bound dt < 2/alpha1 = " << 2.0 / k.alpha1
        << " s";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

Rotation triadFuse(const UnitVector3 & tilt, double yaw)
{
  if(!std::isfinite(yaw) || !isFinite(tilt.vec()))
  {
    throw Error(ErrorCode::NonFinite, "triadFuse received a non-finite input");
  }
  // body pair: (tilt, e_x); world pair: (e_z, Rz(yaw) e_x)
  const Vector3 & t1 = tilt.vec();
  const Vector3 bodyCross = t1.cross(Vector3::UnitX());
  if(bodyCross.norm() < tolerance::kTriadCollinear)
  {
    throw Error(ErrorCode::Degenerate, "tilt is collinear with the virtual magnetometer axis");
  }
  const Vector3 t2 = bodyCross.normalized();
  const Vector3 t3 = t1.cross(t2);

  const Vector3 magnetometer(std::cos(yaw), std::sin(yaw), 0.0);
  const Vector3 r1 = Vector3::UnitZ();
  const Vector3 r2 = r1.cross(magnetometer).normalized();
  const Vector3 r3 = r1.cross(r2);

  Matrix3 body;
  body << t1, t2, t3;
  Matrix3 world;
  world << r1, r2, r3;
  return Rotation::fromMatrix(world * body.transpose());
}

TiltObserver::TiltObserver(const Gains & gains, GravityConstant g0, Mode mode) : gains_(gains), g0_(g0), mode_(mode)
{
  gains_.validate();
}

void TiltObserver::reset(const Vector3 & yv0, const UnitVector3 & tiltGuess)
{
  requireFinite(yv0, "y_v");
  state_ = initialObserverState(yv0, tiltGuess);
}

void TiltObserver::update(const ImuSample & imu, const Vector3 & yv, double dt)
{
  if(mode_ == Mode::Full)
  {
    state_ = observerStep(state_, imu, yv, gains_, g0_, dt);
    return;
  }
  const IntermediateState next = intermediateEstimatorStep({state_.x1Hat, state_.x2PrimeHat}, imu, yv, gains_.alpha1,
                                                           gains_.alpha2, g0_, dt);
  state_.x1Hat = next.x1Hat;
  state_.x2PrimeHat = next.x2PrimeHat;
}

UnitVector3 TiltObserver::tiltEstimate() const
{
  if(mode_ == Mode::Full)
  {
    return state_.x2Hat;
  }
  return UnitVector3::normalized(state_.x2PrimeHat);
}

} // namespace tiltobs
