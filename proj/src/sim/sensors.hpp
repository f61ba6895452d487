#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "anchor/anchor.hpp"
#include "observer/observer.hpp"
#include "sim/rigid_body.hpp"

namespace tiltobs
{

/// Body-to-IMU transform, optionally with a scripted sinusoidal motion that
/// stands in for upper-body joint motion. The motion is visible to the
/// encoders.
struct ImuMount
{
  Vector3 position = Vector3(0.0, 0.0, 0.45); ///< body frame [m]
  Rotation orientation; ///< IMU to body
  double motionAmplitude = 0.0; ///< translation along body x [m]
  double motionAngle = 0.0; ///< rotation about the IMU y axis [rad]
  double motionFrequency = 0.0; ///< [Hz]

  struct Pose
  {
    Vector3 position; ///< body frame
    Rotation orientation; ///< IMU to body
    Vector3 velocity; ///< body frame, relative to the body
    Vector3 acceleration; ///< body frame, relative to the body
    Vector3 angularVelocity; ///< IMU frame, relative to the body
  };

  Pose at(double t) const;
};

struct ImuNoiseModel
{
  double gyroSd = 0.02; ///< [rad/s]
  double accelSd = 0.5; ///< [m/s^2]
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-axis Gaussian noise from a seeded generator.
class ImuNoise
{
public:
  explicit ImuNoise(const ImuNoiseModel & model);

  Vector3 gyro();
  Vector3 accel();

private:
  Vector3 draw(double sd);

  ImuNoiseModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// Exact IMU kinematics at one instant.
struct ImuTruth
{
  Rotation orientation; ///< R_L, IMU to world
  Vector3 position; ///< world
  Vector3 velocity; ///< world
  Vector3 acceleration; ///< world
  Vector3 angularVelocity; ///< IMU frame
  Vector3 tilt; ///< R_L^T e_z
  Vector3 localVelocity; ///< R_L^T velocity, the observer's x1
};

ImuTruth imuTruth(const RigidBodyState & state, const Accelerations & acc, const ImuMount & mount, double t);

/// y_g = omega_L + n_g, y_a = R_L^T (pddot_L + g0 e_z) + n_a. A null noise
/// source gives exact readings.
ImuSample imuMeasure(const ImuTruth & truth, double g0, ImuNoise * noise, double t);

/// What forward kinematics reports with the contact assumed flat: the
/// control reference is the body frame turned by the body yaw, so the
/// encoders never see the contact rotation R_C = R_body Rz(yaw)^T.
struct EncoderReading
{
  Vector3 pImuReference; ///< IMU position, control reference [m]
  Rotation rCL; ///< IMU orientation, control reference
  std::optional<Vector3> anchor; ///< anchor position, control reference
  Rotation contactRotation; ///< R_C, ground truth only
};

/// anchorWorld is the anchor in world coordinates (e.g. the ZMP), nullopt in
/// flight.
EncoderReading kinematicMeasure(const RigidBodyState & state,
                                const ImuMount & mount,
                                double t,
                                const std::optional<Vector3> & anchorWorld);

/// Foot-force interpolation of the anchor, in the control reference.
/// nullopt when neither foot is loaded.
std::optional<Vector3> footAnchor(const RigidBodyState & state,
                                  const ContactModel & model,
                                  const ContactForces & contacts);

} // namespace tiltobs
