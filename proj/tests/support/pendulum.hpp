#pragma once

#include <cmath>

#include "anchor/anchor.hpp"
#include "oracles.hpp"

namespace fixture
{

using tiltobs::KinematicSample;
using tiltobs::Matrix3;
using tiltobs::Rotation;
using tiltobs::Vector3;

// Pendulum about a world-fixed contact at the origin. The contact itself
// rotates by R_C(t) = Rx(a sin t); the encoders see cR_L(t) = Ry(b sin 2t)
// and the IMU sits at r in the local frame. Everything is analytic.
struct Pendulum
{
  double a = 0.15;
  double b = 0.4;
  Vector3 r = Vector3(0.05, -0.02, 0.8);

  struct Sample
  {
    KinematicSample kin;
    Vector3 gyro;
    Vector3 trueLocalVelocity;
  };

  Sample at(double t) const
  {
    const double th = a * std::sin(t);
    const double thDot = a * std::cos(t);
    const double ph = b * std::sin(2.0 * t);
    const double phDot = 2.0 * b * std::cos(2.0 * t);
    const Matrix3 rc = oracle::axisAngle(Vector3::UnitX(), th);
    const Matrix3 rcl = oracle::axisAngle(Vector3::UnitY(), ph);
    const Vector3 omegaC = thDot * Vector3::UnitX();
    const Vector3 omegaCL = phDot * Vector3::UnitY();
    const Vector3 pcl = rcl * r;
    const Vector3 pdotcl = rcl * omegaCL.cross(r);
    const Vector3 pdot = rc * (omegaC.cross(pcl) + pdotcl);
    const Matrix3 rl = rc * rcl;
    Sample s;
    s.kin.pCL = pcl;
    s.kin.rCL = Rotation::fromMatrix(rcl);
    s.kin.pdotCL = pdotcl;
    s.kin.omegaCL = omegaCL;
    s.kin.t = t;
    s.gyro = rcl.transpose() * omegaC + omegaCL;
    s.trueLocalVelocity = rl.transpose() * pdot;
    return s;
  }
};

} // namespace fixture
