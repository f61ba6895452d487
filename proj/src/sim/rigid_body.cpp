#include "sim/rigid_body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common/error.hpp"

namespace tiltobs
{

ContactModel ContactModel::biped(double comHeight,
                                 double footHalfLength,
                                 double footHalfWidth,
                                 double footLateralOffset,
                                 bool landingPoints,
                                 double bodyTop)
{
  ContactModel model;
  for(const auto & [side, group] : {std::pair{1.0, ContactGroup::LeftFoot}, std::pair{-1.0, ContactGroup::RightFoot}})
  {
    const double yc = side * footLateralOffset;
    for(double sx : {1.0, -1.0})
    {
      for(double sy : {1.0, -1.0})
      {
        model.points.push_back({Vector3(sx * footHalfLength, yc + sy * footHalfWidth, -comHeight), group});
      }
    }
  }
  if(landingPoints)
  {
    for(double sx : {1.0, -1.0})
    {
      for(double sy : {1.0, -1.0})
      {
        model.points.push_back({Vector3(sx * 0.1, sy * 0.15, bodyTop), ContactGroup::Landing});
      }
    }
  }
  return model;
}

void ContactModel::validate() const
{
  if(!(stiffness > 0.0) || !std::isfinite(stiffness))
  {
    throw Error(ErrorCode::InvalidArgument, "contact stiffness must be positive");
  }
  if(!(damping >= 0.0) || !std::isfinite(damping))
  {
    throw Error(ErrorCode::InvalidArgument, "contact damping must be non-negative");
  }
  if(!(tangentialStiffness >= 0.0) || !(tangentialDamping >= 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "tangential stiffness and damping must be non-negative");
  }
  if(points.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "contact model has no points");
  }
  for(const ContactPoint & c : points)
  {
    if(!isFinite(c.offset))
    {
      throw Error(ErrorCode::NonFinite, "contact point offset is not finite");
    }
  }
}

ContactForces contactForces(const RigidBodyState & state, const ContactModel & model, TangentialAnchors & anchors)
{
  anchors.anchors.resize(model.points.size());
  ContactForces out;
  out.points.resize(model.points.size());
  Vector3 zmpSum = Vector3::Zero();
  const Matrix3 & r = state.r.matrix();
  const Vector3 omegaWorld = r * state.omega;

  for(std::size_t i = 0; i < model.points.size(); ++i)
  {
    const Vector3 lever = r * model.points[i].offset;
    const Vector3 position = state.p + lever;
    PointContact & c = out.points[i];
    std::optional<Vector3> & anchor = anchors.anchors[i];
    if(position.z() >= 0.0)
    {
      anchor.reset();
      continue;
    }
    const Vector3 velocity = state.v + omegaWorld.cross(lever);
    c.touching = true;
    c.penetration = -position.z();
    c.groundPoint = Vector3(position.x(), position.y(), 0.0);
    if(!anchor)
    {
      anchor = c.groundPoint;
    }

    const double normal = std::max(0.0, model.stiffness * c.penetration - model.damping * velocity.z());
    const Vector3 stretch(position.x() - anchor->x(), position.y() - anchor->y(), 0.0);
    const Vector3 slide(velocity.x(), velocity.y(), 0.0);
    c.force = -model.tangentialStiffness * stretch - model.tangentialDamping * slide;
    c.force.z() = normal;

    out.force += c.force;
    out.torque += lever.cross(c.force);
    out.normalForce += normal;
    out.springEnergy +=
        0.5 * model.stiffness * c.penetration * c.penetration + 0.5 * model.tangentialStiffness * stretch.squaredNorm();
    zmpSum += normal * c.groundPoint;
    if(model.points[i].group == ContactGroup::LeftFoot)
    {
      out.leftFootForce += normal;
    }
    else if(model.points[i].group == ContactGroup::RightFoot)
    {
      out.rightFootForce += normal;
    }
  }
  if(out.normalForce > 0.0)
  {
    out.zmp = zmpSum / out.normalForce;
  }
  return out;
}

Accelerations bodyAccelerations(const RigidBodyState & state,
                                const BodyModel & body,
                                const ContactForces & contacts,
                                const std::vector<PushEvent> & pushes,
                                double t,
                                double g0)
{
  const Matrix3 & r = state.r.matrix();
  Vector3 force = contacts.force - body.mass * g0 * Vector3::UnitZ();
  Vector3 torqueWorld = contacts.torque;
  for(const PushEvent & push : pushes)
  {
    if(push.activeAt(t))
    {
      force += push.force;
      torqueWorld += (r * push.point).cross(push.force);
    }
  }
  const Vector3 torque = r.transpose() * torqueWorld;
  const Vector3 & inertia = body.inertia;
  const Vector3 momentum = inertia.cwiseProduct(state.omega);
  Accelerations acc;
  acc.linear = force / body.mass;
  acc.angular = (torque - state.omega.cross(momentum)).cwiseQuotient(inertia);
  return acc;
}

RigidBodyState dynamicsStep(const RigidBodyState & state, const Accelerations & acc, double dt, double t)
{
  if(!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "simulation step must be positive");
  }
  RigidBodyState next;
  next.v = state.v + dt * acc.linear;
  next.omega = state.omega + dt * acc.angular;
  next.p = state.p + dt * next.v;
  if(!isFinite(next.v) || !isFinite(next.omega) || !isFinite(next.p) || !(next.v.norm() <= kMaxSpeed)
     || !(next.omega.norm() <= kMaxAngularRate))
  {
    std::ostringstream msg;
    msg << "simulation diverged at t = " << t << " s (|v| = " << next.v.norm() << " m/s, |omega| = "
        << next.omega.norm() << " rad/s)";
    throw Error(ErrorCode::Diverged, msg.str());
  }
  next.r = rotateStep(state.r, next.omega, dt);
  return next;
}

double mechanicalEnergy(const RigidBodyState & state, const BodyModel & body, const ContactForces & contacts, double g0)
{
  const double translational = 0.5 * body.mass * state.v.squaredNorm();
  const double rotational = 0.5 * state.omega.dot(body.inertia.cwiseProduct(state.omega));
  return translational + rotational + body.mass * g0 * state.p.z() + contacts.springEnergy;
}

} // namespace tiltobs
