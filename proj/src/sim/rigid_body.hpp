#pragma once

#include <optional>
#include <vector>

#include "geometry/geometry.hpp"

namespace tiltobs
{

/// Pose and twist of the simulated body. Body origin at the center of mass.
struct RigidBodyState
{
  Vector3 p = Vector3::Zero(); ///< position, world [m]
  Rotation r; ///< body to world
  Vector3 v = Vector3::Zero(); ///< linear velocity, world [m/s]
  Vector3 omega = Vector3::Zero(); ///< angular velocity, body frame [rad/s]
};

struct BodyModel
{
  double mass = 42.6;
  Vector3 inertia = Vector3(6.0, 5.5, 0.8); ///< principal moments about the COM [kg m^2]
};

enum class ContactGroup
{
  LeftFoot,
  RightFoot,
  Landing ///< points on the upper body that only touch after a fall
};

struct ContactPoint
{
  Vector3 offset; ///< body frame [m]
  ContactGroup group;
};

/// Viscoelastic point contacts against the ground plane z = 0.
struct ContactModel
{
  double stiffness = 1e5; ///< normal [N/m]
  double damping = 1e3; ///< normal [N s/m]
  double tangentialStiffness = 1e5; ///< no-slip spring [N/m]
  double tangentialDamping = 1e3; ///< [N s/m]
  std::vector<ContactPoint> points;

  /// Two rectangular feet (four corners each) below the COM plus landing
  /// points at the top of the body.
  static ContactModel biped(double comHeight = 0.75,
                            double footHalfLength = 0.12,
                            double footHalfWidth = 0.06,
                            double footLateralOffset = 0.1,
                            bool landingPoints = true,
                            double bodyTop = 0.65);

  void validate() const;
};

/// Horizontal no-slip anchors of the touching points, created on first
/// contact and released on lift-off.
struct TangentialAnchors
{
  std::vector<std::optional<Vector3>> anchors;
};

struct PointContact
{
  bool touching = false;
  double penetration = 0.0; ///< [m], positive below ground
  Vector3 groundPoint = Vector3::Zero(); ///< projection of the point on z = 0
  Vector3 force = Vector3::Zero(); ///< world
};

struct ContactForces
{
  std::vector<PointContact> points;
  Vector3 force = Vector3::Zero(); ///< total, world
  Vector3 torque = Vector3::Zero(); ///< about the COM, world
  double normalForce = 0.0;
  double leftFootForce = 0.0;
  double rightFootForce = 0.0;
  std::optional<Vector3> zmp; ///< world, nullopt when nothing touches
  double springEnergy = 0.0; ///< normal plus tangential spring energy

  bool inFlight() const
  {
    return !zmp.has_value();
  }
};

/// Evaluates all point contacts. Normal force max(0, k d + c d_dot) is never
/// pulling. Tangential anchors are created or released in place.
ContactForces contactForces(const RigidBodyState & state, const ContactModel & model, TangentialAnchors & anchors);

/// External force applied over [tStart, tStart + duration).
struct PushEvent
{
  double tStart = 0.0;
  double duration = 0.1;
  Vector3 force = Vector3::Zero(); ///< world [N]
  Vector3 point = Vector3::Zero(); ///< application point, body frame [m]

  bool activeAt(double t) const
  {
    return t >= tStart && t < tStart + duration;
  }
};

struct Accelerations
{
  Vector3 linear = Vector3::Zero(); ///< COM, world
  Vector3 angular = Vector3::Zero(); ///< body frame
};

/// Newton-Euler accelerations under gravity, contacts and active pushes.
Accelerations bodyAccelerations(const RigidBodyState & state,
                                const BodyModel & body,
                                const ContactForces & contacts,
                                const std::vector<PushEvent> & pushes,
                                double t,
                                double g0);

/// Far beyond anything a pushed biped reaches; past them the explicit
/// contact integration has blown up (typically dt_sim too coarse for the
/// contact stiffness).
inline constexpr double kMaxSpeed = 100.0; ///< [m/s]
inline constexpr double kMaxAngularRate = 1000.0; ///< [rad/s]

/// Semi-implicit Euler: velocities first, then position and rotateStep.
/// Throws Diverged, with the timestamp, if the state stops being finite or
/// exceeds kMaxSpeed / kMaxAngularRate.
RigidBodyState dynamicsStep(const RigidBodyState & state, const Accelerations & acc, double dt, double t);

/// Kinetic + gravitational + contact spring energy.
double mechanicalEnergy(const RigidBodyState & state, const BodyModel & body, const ContactForces & contacts, double g0);

} // namespace tiltobs
