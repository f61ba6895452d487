#pragma once

#include <cmath>

#include "geometry/geometry.hpp"
#include "observer/observer.hpp"

namespace tiltobs
{

/// World-frame observer error xi = (z1, z2', z2) with z_i = R_L * (x_i - xhat_i).
/// The tilt error satisfies (e_z - z2) on the unit sphere.
struct ErrorState
{
  Vector3 z1 = Vector3::Zero();
  Vector3 z2p = Vector3::Zero();
  Vector3 z2 = Vector3::Zero();

  /// Checks the sphere constraint within tolerance::kManifold.
  static ErrorState make(const Vector3 & z1, const Vector3 & z2p, const Vector3 & z2);

  /// Euclidean norm of the stacked 9-vector.
  double norm() const
  {
    return std::sqrt(z1.squaredNorm() + z2p.squaredNorm() + z2.squaredNorm());
  }

  /// Angle between the true tilt and its estimate, i.e. between e_z and e_z - z2.
  double tiltAngle() const;
};

struct ErrorDerivative
{
  Vector3 dz1;
  Vector3 dz2p;
  Vector3 dz2;
};

struct LyapunovRate
{
  double vdot; ///< exact derivative of V along the error flow
  double bound; ///< -rho^T H rho
};

/// Right-hand side of the autonomous error ODE.
inline ErrorDerivative errorDerivative(const ErrorState & xi, const Gains & k, GravityConstant g0)
{
  const double g = g0.value();
  const Vector3 u = Vector3::UnitZ() - xi.z2;
  const Vector3 d = xi.z2 - xi.z2p;
  // skew(u)^2 d = u (u.d) - |u|^2 d, |u| = 1 on the state space
  return {-k.alpha1 * xi.z1 - g * xi.z2p, (k.alpha2 / g) * xi.z1, k.gamma * (u * u.dot(d) - u.squaredNorm() * d)};
}

/// Lyapunov function certifying almost-global convergence.
inline double lyapunovV(const ErrorState & xi, const Gains & k, GravityConstant g0)
{
  const double a = k.alpha1;
  const double b = k.alpha2;
  const double g = g0.value();
  const Vector3 mixed = a * xi.z1 + g * xi.z2p;
  return b / (8.0 * a * g) * xi.z1.squaredNorm() + mixed.squaredNorm() / (8.0 * a * g)
         + a * g / (4.0 * b) * xi.z2p.squaredNorm() + xi.z2.squaredNorm() / (2.0 * k.gamma);
}

/// Gradient of lyapunovV with respect to (z1, z2', z2).
ErrorDerivative lyapunovGradient(const ErrorState & xi, const Gains & k, GravityConstant g0);

/// dV/dt along errorDerivative together with the quadratic upper bound.
LyapunovRate lyapunovVdotBound(const ErrorState & xi, const Gains & k, GravityConstant g0);

/// The bound matrix H acting on rho = (|z1|, |z2'|, |skew(e_z) z2|).
Matrix3 lyapunovBoundMatrix(const Gains & k, GravityConstant g0);

/// u <- u / |u| for u = e_z - z2.
inline void projectOnSphere(ErrorState & xi)
{
  const Vector3 u = Vector3::UnitZ() - xi.z2;
  xi.z2 = Vector3::UnitZ() - u / u.norm();
}

/// Explicit Euler step of the error ODE followed by projection of z2 back on
/// its sphere; the same discretization the observer uses.
inline ErrorState errorEulerStep(const ErrorState & xi, const Gains & k, GravityConstant g0, double dt)
{
  const ErrorDerivative d = errorDerivative(xi, k, g0);
  ErrorState next{xi.z1 + dt * d.dz1, xi.z2p + dt * d.dz2p, xi.z2 + dt * d.dz2};
  projectOnSphere(next);
  return next;
}

/// Error state of an observer with respect to the true sensor velocity and
/// world orientation (the true tilt is trueOrientation^T e_z).
ErrorState errorFromObserver(const ObserverState & estimate,
                             const Vector3 & trueVelocity,
                             const Rotation & trueOrientation);

struct LocalErrorDerivative
{
  Vector3 dx1;
  Vector3 dx2p;
  Vector3 dx2;
};

/// Sensor-frame error dynamics of (x1 - x1hat, x2 - x2hat', x2 - x2hat); time
/// varying through the gyro and the current estimate x2hat.
LocalErrorDerivative localErrorDerivative(const Vector3 & x1Tilde,
                                          const Vector3 & x2pTilde,
                                          const Vector3 & x2Tilde,
                                          const Vector3 & x2Hat,
                                          const Vector3 & gyro,
                                          const Gains & k,
                                          GravityConstant g0);

} // namespace tiltobs
