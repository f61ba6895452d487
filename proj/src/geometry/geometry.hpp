#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tiltobs
{

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Upward vertical of the world frame.
inline Vector3 unitZ()
{
  return Vector3::UnitZ();
}

bool isFinite(const Vector3 & v);

/// Skew-symmetric matrix such that skew(v) * w == v.cross(w).
Matrix3 skew(const Vector3 & v);

/// A direction on the unit sphere. Construction either normalizes an input
/// or checks that it already has unit norm.
class UnitVector3
{
public:
  /// e_z
  UnitVector3();

  /// Normalizes v. Throws Degenerate for a (near) zero or non-finite vector.
  static UnitVector3 normalized(const Vector3 & v);

  /// Accepts v only if | ||v|| - 1 | <= tolerance::kManifold; the stored
  /// value is renormalized.
  static UnitVector3 fromUnit(const Vector3 & v);

  const Vector3 & vec() const noexcept
  {
    return u_;
  }

  operator const Vector3 &() const noexcept
  {
    return u_;
  }

  double x() const noexcept
  {
    return u_.x();
  }
  double y() const noexcept
  {
    return u_.y();
  }
  double z() const noexcept
  {
    return u_.z();
  }

private:
  explicit UnitVector3(const Vector3 & u) : u_(u) {}

  Vector3 u_;
};

/// Element of SO(3), stored as its matrix.
class Rotation
{
public:
  /// identity
  Rotation();

  /// Validates orthonormality and det = +1 within tolerance::kManifold.
  static Rotation fromMatrix(const Matrix3 & m);

  /// Rodrigues exponential of skew(rotationVector).
  static Rotation exp(const Vector3 & rotationVector);

  static Rotation aboutX(double angle);
  static Rotation aboutY(double angle);
  static Rotation aboutZ(double angle);

  /// Rotation vector of this rotation, angle in [0, pi].
  Vector3 log() const;

  const Matrix3 & matrix() const noexcept
  {
    return m_;
  }

  Rotation transpose() const
  {
    return Rotation(m_.transpose(), Unchecked{});
  }

  Rotation operator*(const Rotation & other) const
  {
    return Rotation(m_ * other.m_, Unchecked{});
  }

  Vector3 operator*(const Vector3 & v) const
  {
    return m_ * v;
  }

  /// Heading of the body x axis projected on the horizontal plane.
  double yaw() const;

  /// Twist about z in the swing-twist split R = swing * Rz(twist), where the
  /// swing is the shortest rotation taking e_z to R e_z. Unlike yaw() this is
  /// only singular when the body is upside down.
  double twist() const;

private:
  struct Unchecked
  {
  };
  Rotation(const Matrix3 & m, Unchecked) : m_(m) {}

  Matrix3 m_;
};

/// R * Exp(skew(omega * dt)), i.e. one exact step of Rdot = R skew(omega)
/// with omega held constant over the step.
Rotation rotateStep(const Rotation & r, const Vector3 & omega, double dt);

/// Explicit Euler step of a unit vector along udot followed by
/// renormalization. Throws Degenerate when u + udot * dt collapses.
UnitVector3 sphereStep(const UnitVector3 & u, const Vector3 & udot, double dt);

} // namespace tiltobs
