#include "geometry/geometry.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "geometry/tolerances.hpp"

namespace tiltobs
{

bool isFinite(const Vector3 & v)
{
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

Matrix3 skew(const Vector3 & v)
{
  Matrix3 s;
  s << 0.0, -v.z(), v.y(), //
      v.z(), 0.0, -v.x(), //
      -v.y(), v.x(), 0.0;
  return s;
}

UnitVector3::UnitVector3() : u_(Vector3::UnitZ()) {}

UnitVector3 UnitVector3::normalized(const Vector3 & v)
{
  const double n = v.norm();
  if(!std::isfinite(n) || n < tolerance::kDegenerateNorm)
  {
    throw Error(ErrorCode::Degenerate, "cannot normalize a zero or non-finite vector");
  }
  return UnitVector3(v / n);
}

UnitVector3 UnitVector3::fromUnit(const Vector3 & v)
{
  const double n = v.norm();
  if(!std::isfinite(n) || std::abs(n - 1.0) > tolerance::kManifold)
  {
    std::ostringstream msg;
    msg << "vector is not unit (norm " << n << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return UnitVector3(v / n);
}

Rotation::Rotation() : m_(Matrix3::Identity()) {}

Rotation Rotation::fromMatrix(const Matrix3 & m)
{
  if(!m.allFinite())
  {
    throw Error(ErrorCode::NonFinite, "rotation matrix has non-finite entries");
  }
  const double orthoError = (m.transpose() * m - Matrix3::Identity()).cwiseAbs().maxCoeff();
  const double detError = std::abs(m.determinant() - 1.0);
  if(orthoError > tolerance::kManifold || detError > tolerance::kManifold)
  {
    std::ostringstream msg;
    msg << "matrix is not a rotation (|R^T R - I| = " << orthoError << ", |det - 1| = " << detError << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return Rotation(m, Unchecked{});
}

Rotation Rotation::exp(const Vector3 & rotationVector)
{
  const double theta2 = rotationVector.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;
  double b;
  if(theta < 1e-4)
  {
    // Taylor expansions of sin(t)/t and (1 - cos(t))/t^2
    a = 1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0);
    b = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0);
  }
  else
  {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Matrix3 k = skew(rotationVector);
  return Rotation(Matrix3::Identity() + a * k + b * k * k, Unchecked{});
}

Rotation Rotation::aboutX(double angle)
{
  return exp(Vector3::UnitX() * angle);
}

Rotation Rotation::aboutY(double angle)
{
  return exp(Vector3::UnitY() * angle);
}

Rotation Rotation::aboutZ(double angle)
{
  return exp(Vector3::UnitZ() * angle);
}

Vector3 Rotation::log() const
{
  Eigen::Quaterniond q(m_);
  if(q.w() < 0.0)
  {
    q.coeffs() = -q.coeffs();
  }
  const double s = q.vec().norm();
  if(s < 1e-300)
  {
    return Vector3::Zero();
  }
  const double angle = 2.0 * std::atan2(s, q.w());
  return q.vec() * (angle / s);
}

double Rotation::yaw() const
{
  return std::atan2(m_(1, 0), m_(0, 0));
}

double Rotation::twist() const
{
  const Eigen::Quaterniond q(m_);
  return 2.0 * std::atan2(q.z(), q.w());
}

Rotation rotateStep(const Rotation & r, const Vector3 & omega, double dt)
{
  if(!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "rotateStep requires dt > 0");
  }
  return r * Rotation::exp(omega * dt);
}

UnitVector3 sphereStep(const UnitVector3 & u, const Vector3 & udot, double dt)
{
  if(!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "sphereStep requires dt > 0");
  }
  const Vector3 next = u.vec() + udot * dt;
  const double n = next.norm();
  if(!std::isfinite(n) || n < tolerance::kDegenerateNorm)
  {
    throw Error(ErrorCode::Degenerate, "sphere step collapsed to the origin");
  }
  return UnitVector3::normalized(next);
}

} // namespace tiltobs
