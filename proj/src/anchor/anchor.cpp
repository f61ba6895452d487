#include "anchor/anchor.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"

namespace tiltobs
{

namespace
{

double checkedStep(double previous, double current)
{
  const double dt = current - previous;
  if(!(dt > 0.0))
  {
    std::ostringstream msg;
    msg << "samples must have strictly increasing time (t=" << previous << " then t=" << current << ")";
    throw Error(ErrorCode::TimeOrdering, msg.str());
  }
  return dt;
}

} // namespace

Vector3 velocityFixedAnchor(const KinematicSample & kin, const Vector3 & gyro)
{
  const Matrix3 rT = kin.rCL.matrix().transpose();
  return rT * kin.pdotCL + (gyro - kin.omegaCL).cross(rT * kin.pCL);
}

Vector3 velocityMovingAnchor(const KinematicSample & kin, const AnchorState & anchor, const Vector3 & gyro)
{
  const Matrix3 rT = kin.rCL.matrix().transpose();
  return rT * kin.pdotCL + (gyro - kin.omegaCL).cross(rT * kin.pCL) + rT * anchor.velocity;
}

Vector3 interpolateAnchor(const ContactFootState & left, const ContactFootState & right)
{
  if(!(left.verticalForce >= 0.0) || !(right.verticalForce >= 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "vertical contact forces must be non-negative");
  }
  const double total = left.verticalForce + right.verticalForce;
  if(!(total > 0.0))
  {
    throw Error(ErrorCode::NoSupport, "no foot carries vertical force");
  }
  return (left.verticalForce * left.position + right.verticalForce * right.position) / total;
}

std::vector<Vector3> finiteDifference(std::span<const TimedVector> samples)
{
  std::vector<Vector3> out;
  out.reserve(samples.size());
  for(std::size_t k = 0; k < samples.size(); ++k)
  {
    if(k == 0)
    {
      out.push_back(Vector3::Zero());
      continue;
    }
    const double dt = checkedStep(samples[k - 1].t, samples[k].t);
    out.push_back((samples[k].value - samples[k - 1].value) / dt);
  }
  return out;
}

std::vector<Vector3> finiteDifference(std::span<const TimedRotation> samples)
{
  std::vector<Vector3> out;
  out.reserve(samples.size());
  for(std::size_t k = 0; k < samples.size(); ++k)
  {
    if(k == 0)
    {
      out.push_back(Vector3::Zero());
      continue;
    }
    const double dt = checkedStep(samples[k - 1].t, samples[k].t);
    out.push_back((samples[k - 1].value.transpose() * samples[k].value).log() / dt);
  }
  return out;
}

Vector3 VectorDifferentiator::update(double t, const Vector3 & value)
{
  Vector3 derivative = Vector3::Zero();
  if(previous_)
  {
    const double dt = checkedStep(previous_->t, t);
    derivative = (value - previous_->value) / dt;
  }
  previous_ = TimedVector{t, value};
  return derivative;
}

void VectorDifferentiator::reset()
{
  previous_.reset();
}

Vector3 RotationDifferentiator::update(double t, const Rotation & value)
{
  Vector3 derivative = Vector3::Zero();
  if(previous_)
  {
    const double dt = checkedStep(previous_->t, t);
    derivative = (previous_->value.transpose() * value).log() / dt;
  }
  previous_ = TimedRotation{t, value};
  return derivative;
}

void RotationDifferentiator::reset()
{
  previous_.reset();
}

Vector3 LowPassFilter::update(double dt, const Vector3 & input)
{
  if(cutoffHz_ <= 0.0)
  {
    return input;
  }
  if(!state_)
  {
    state_ = input;
    return input;
  }
  const double blend = 1.0 - std::exp(-2.0 * M_PI * cutoffHz_ * dt);
  *state_ += blend * (input - *state_);
  return *state_;
}

void LowPassFilter::reset()
{
  state_.reset();
}

AnchorState AnchorTracker::update(double t, const std::optional<Vector3> & position)
{
  const double dt = lastTime_ ? checkedStep(*lastTime_, t) : 0.0;
  lastTime_ = t;

  AnchorState out;
  if(!position)
  {
    // flight: hold the last anchor, no anchor velocity. The filter is frozen
    // so that the anchor resumes from here on touchdown.
    out.position = last_.value_or(Vector3::Zero());
    // keep the difference history current, else the first contact tick
    // divides a jump by the whole flight duration
    differentiator_.update(t, out.position);
    return out;
  }

  // The filtered position is the control-frame origin and v_a is its exact
  // backward difference, so rebasing and v_a always cancel consistently.
  out.position = filter_.update(dt, *position);
  out.velocity = differentiator_.update(t, out.position);
  last_ = out.position;
  return out;
}

VelocityReconstructor::Output VelocityReconstructor::update(double t,
                                                            const Vector3 & pImuReference,
                                                            const Rotation & rCL,
                                                            const std::optional<Vector3> & anchorPosition,
                                                            const Vector3 & gyro)
{
  Output out;
  out.anchor = anchor_.update(t, anchorPosition);

  KinematicSample & kin = out.kinematics;
  kin.t = t;
  kin.pCL = rebaseToAnchor(pImuReference, out.anchor.position);
  kin.rCL = rCL;
  kin.pdotCL = position_.update(t, kin.pCL);
  kin.omegaCL = orientation_.update(t, rCL);

  out.yv = velocityMovingAnchor(kin, out.anchor, gyro);
  return out;
}

} // namespace tiltobs
