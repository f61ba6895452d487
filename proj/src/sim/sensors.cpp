#include "sim/sensors.hpp"

#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace tiltobs
{

ImuMount::Pose ImuMount::at(double t) const
{
  Pose pose{position, orientation, Vector3::Zero(), Vector3::Zero(), Vector3::Zero()};
  if(motionFrequency <= 0.0 || (motionAmplitude == 0.0 && motionAngle == 0.0))
  {
    return pose;
  }
  const double w = 2.0 * std::numbers::pi * motionFrequency;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  pose.position += motionAmplitude * s * Vector3::UnitX();
  pose.velocity = motionAmplitude * w * c * Vector3::UnitX();
  pose.acceleration = -motionAmplitude * w * w * s * Vector3::UnitX();
  pose.orientation = orientation * Rotation::aboutY(motionAngle * s);
  pose.angularVelocity = motionAngle * w * c * Vector3::UnitY();
  return pose;
}

void ImuNoiseModel::validate() const
{
  if(!(gyroSd >= 0.0) || !(accelSd >= 0.0) || !std::isfinite(gyroSd) || !std::isfinite(accelSd))
  {
    throw Error(ErrorCode::InvalidArgument, "noise standard deviations must be finite and non-negative");
  }
}

ImuNoise::ImuNoise(const ImuNoiseModel & model) : model_(model), rng_(model.seed)
{
  model_.validate();
}

Vector3 ImuNoise::draw(double sd)
{
  const double x = normal_(rng_);
  const double y = normal_(rng_);
  const double z = normal_(rng_);
  return sd * Vector3(x, y, z);
}

Vector3 ImuNoise::gyro()
{
  return draw(model_.gyroSd);
}

Vector3 ImuNoise::accel()
{
  return draw(model_.accelSd);
}

ImuTruth imuTruth(const RigidBodyState & state, const Accelerations & acc, const ImuMount & mount, double t)
{
  const ImuMount::Pose pose = mount.at(t);
  const Matrix3 & r = state.r.matrix();
  const Vector3 & w = state.omega;
  const Vector3 & r0 = pose.position;

  ImuTruth truth;
  truth.orientation = state.r * pose.orientation;
  truth.position = state.p + r * r0;
  truth.velocity = state.v + r * (w.cross(r0) + pose.velocity);
  truth.acceleration = acc.linear
                       + r
                             * (acc.angular.cross(r0) + w.cross(w.cross(r0)) + 2.0 * w.cross(pose.velocity)
                                + pose.acceleration);
  truth.angularVelocity = pose.orientation.matrix().transpose() * w + pose.angularVelocity;
  const Matrix3 rlT = truth.orientation.matrix().transpose();
  truth.tilt = rlT.col(2);
  truth.localVelocity = rlT * truth.velocity;
  return truth;
}

ImuSample imuMeasure(const ImuTruth & truth, double g0, ImuNoise * noise, double t)
{
  const Matrix3 rlT = truth.orientation.matrix().transpose();
  ImuSample sample;
  sample.t = t;
  sample.gyro = truth.angularVelocity;
  sample.accel = rlT * (truth.acceleration + g0 * Vector3::UnitZ());
  if(noise != nullptr)
  {
    sample.gyro += noise->gyro();
    sample.accel += noise->accel();
  }
  return sample;
}

EncoderReading kinematicMeasure(const RigidBodyState & state,
                                const ImuMount & mount,
                                double t,
                                const std::optional<Vector3> & anchorWorld)
{
  const ImuMount::Pose pose = mount.at(t);
  const Rotation heading = Rotation::aboutZ(state.r.twist());
  EncoderReading out{heading * pose.position, heading * pose.orientation, std::nullopt,
                     state.r * heading.transpose()};
  if(anchorWorld)
  {
    out.anchor = heading * (state.r.transpose() * (*anchorWorld - state.p));
  }
  return out;
}

std::optional<Vector3> footAnchor(const RigidBodyState & state,
                                  const ContactModel & model,
                                  const ContactForces & contacts)
{
  if(!(contacts.leftFootForce > 0.0) && !(contacts.rightFootForce > 0.0))
  {
    return std::nullopt;
  }
  Vector3 left = Vector3::Zero();
  Vector3 right = Vector3::Zero();
  int nl = 0;
  int nr = 0;
  for(const ContactPoint & c : model.points)
  {
    if(c.group == ContactGroup::LeftFoot)
    {
      left += c.offset;
      ++nl;
    }
    else if(c.group == ContactGroup::RightFoot)
    {
      right += c.offset;
      ++nr;
    }
  }
  if(nl == 0 || nr == 0)
  {
    return std::nullopt;
  }
  const Rotation heading = Rotation::aboutZ(state.r.twist());
  return interpolateAnchor({heading * (left / nl), contacts.leftFootForce},
                           {heading * (right / nr), contacts.rightFootForce});
}

} // namespace tiltobs
