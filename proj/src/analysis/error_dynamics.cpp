#include "analysis/error_dynamics.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "geometry/tolerances.hpp"

namespace tiltobs
{

ErrorState ErrorState::make(const Vector3 & z1, const Vector3 & z2p, const Vector3 & z2)
{
  const UnitVector3 u = UnitVector3::fromUnit(Vector3::UnitZ() - z2);
  return ErrorState{z1, z2p, Vector3::UnitZ() - u.vec()};
}

double ErrorState::tiltAngle() const
{
  const Vector3 u = Vector3::UnitZ() - z2;
  return std::atan2(u.cross(Vector3::UnitZ()).norm(), u.z());
}

ErrorDerivative lyapunovGradient(const ErrorState & xi, const Gains & k, GravityConstant g0)
{
  const double a = k.alpha1;
  const double b = k.alpha2;
  const double g = g0.value();
  const Vector3 mixed = a * xi.z1 + g * xi.z2p;
  return {b / (4.0 * a * g) * xi.z1 + mixed / (4.0 * g), mixed / (4.0 * a) + a * g / (2.0 * b) * xi.z2p,
          xi.z2 / k.gamma};
}

LyapunovRate lyapunovVdotBound(const ErrorState & xi, const Gains & k, GravityConstant g0)
{
  const ErrorDerivative grad = lyapunovGradient(xi, k, g0);
  const ErrorDerivative flow = errorDerivative(xi, k, g0);
  const double vdot = grad.dz1.dot(flow.dz1) + grad.dz2p.dot(flow.dz2p) + grad.dz2.dot(flow.dz2);

  const Vector3 w = Vector3::UnitZ().cross(xi.z2);
  const Vector3 rho(xi.z1.norm(), xi.z2p.norm(), w.norm());
  const double bound = -rho.dot(lyapunovBoundMatrix(k, g0) * rho);
  return {vdot, bound};
}

Matrix3 lyapunovBoundMatrix(const Gains & k, GravityConstant g0)
{
  const double g = g0.value();
  Matrix3 h;
  h << k.alpha1 * k.alpha1 / (4.0 * g), 0.0, 0.0, //
      0.0, g / 4.0, -0.5, //
      0.0, -0.5, 1.0;
  return h;
}

ErrorState errorFromObserver(const ObserverState & estimate,
                             const Vector3 & trueVelocity,
                             const Rotation & trueOrientation)
{
  const Matrix3 & r = trueOrientation.matrix();
  ErrorState xi;
  xi.z1 = r * (trueVelocity - estimate.x1Hat);
  xi.z2p = Vector3::UnitZ() - r * estimate.x2PrimeHat;
  xi.z2 = Vector3::UnitZ() - r * estimate.x2Hat.vec();
  return xi;
}

LocalErrorDerivative localErrorDerivative(const Vector3 & x1Tilde,
                                          const Vector3 & x2pTilde,
                                          const Vector3 & x2Tilde,
                                          const Vector3 & x2Hat,
                                          const Vector3 & gyro,
                                          const Gains & k,
                                          GravityConstant g0)
{
  const double g = g0.value();
  const Matrix3 s = skew(x2Hat);
  const Matrix3 s2 = s * s;
  LocalErrorDerivative d;
  d.dx1 = -gyro.cross(x1Tilde) - k.alpha1 * x1Tilde - g * x2pTilde;
  d.dx2p = -gyro.cross(x2pTilde) + (k.alpha2 / g) * x1Tilde;
  d.dx2 = -gyro.cross(x2Tilde) + k.gamma * s2 * x2Tilde - k.gamma * s2 * x2pTilde;
  return d;
}

} // namespace tiltobs
