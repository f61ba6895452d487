#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geometry/geometry.hpp"

namespace tiltobs
{

/// Encoder-side pose of the IMU in the control frame, whose origin sits on
/// the anchor point, with its time derivatives.
struct KinematicSample
{
  Vector3 pCL = Vector3::Zero(); ///< IMU position in the control frame [m]
  Rotation rCL; ///< IMU orientation in the control frame
  Vector3 pdotCL = Vector3::Zero(); ///< time derivative of pCL [m/s]
  Vector3 omegaCL = Vector3::Zero(); ///< angular velocity of rCL, local frame [rad/s]
  double t = 0.0;
};

/// Anchor position in the control reference and its world velocity expressed
/// in the control frame (R_C * velocity == d/dt p_a).
struct AnchorState
{
  Vector3 position = Vector3::Zero();
  Vector3 velocity = Vector3::Zero();
};

struct ContactFootState
{
  Vector3 position = Vector3::Zero(); ///< foot location, control frame [m]
  double verticalForce = 0.0; ///< [N], non-negative
};

/// y_v for an anchor fixed in the world at the control-frame origin.
Vector3 velocityFixedAnchor(const KinematicSample & kin, const Vector3 & gyro);

/// y_v for an anchor that moves with velocity anchor.velocity. kin.pCL must
/// already be expressed relative to the current anchor.
Vector3 velocityMovingAnchor(const KinematicSample & kin, const AnchorState & anchor, const Vector3 & gyro);

/// Vertical-force-weighted mean of the two foot positions. Throws NoSupport
/// when both forces vanish and InvalidArgument for a negative force.
Vector3 interpolateAnchor(const ContactFootState & left, const ContactFootState & right);

/// Re-expresses an IMU position given in the control reference relative to
/// the anchor, so that the anchor becomes the control-frame origin.
inline Vector3 rebaseToAnchor(const Vector3 & pImuReference, const Vector3 & anchorPosition)
{
  return pImuReference - anchorPosition;
}

struct TimedVector
{
  double t;
  Vector3 value;
};

struct TimedRotation
{
  double t;
  Rotation value;
};

/// Backward differences over a whole sequence; the first output is zero.
/// Throws TimeOrdering if timestamps are not strictly increasing.
std::vector<Vector3> finiteDifference(std::span<const TimedVector> samples);

/// Local-frame angular velocities Log(R_{k-1}^T R_k) / dt; first output zero.
std::vector<Vector3> finiteDifference(std::span<const TimedRotation> samples);

/// Streaming backward difference of a vector signal.
class VectorDifferentiator
{
public:
  /// Returns zero on the first call.
  Vector3 update(double t, const Vector3 & value);
  void reset();

private:
  std::optional<TimedVector> previous_;
};

/// Streaming backward difference of a rotation signal, local frame.
class RotationDifferentiator
{
public:
  Vector3 update(double t, const Rotation & value);
  void reset();

private:
  std::optional<TimedRotation> previous_;
};

/// First-order low-pass y += (1 - exp(-2 pi fc dt)) (x - y). A non-positive
/// cutoff disables filtering.
class LowPassFilter
{
public:
  explicit LowPassFilter(double cutoffHz = 50.0) : cutoffHz_(cutoffHz) {}

  Vector3 update(double dt, const Vector3 & input);
  void reset();

private:
  double cutoffHz_;
  std::optional<Vector3> state_;
};

/// Turns a stream of anchor positions into AnchorState. The position goes
/// through a first-order low-pass and the velocity is the backward difference
/// of the filtered position (the same as filtering the raw difference).
/// While there is no support (nullopt) the last anchor is held, its velocity
/// is zero and the filter is frozen.
class AnchorTracker
{
public:
  explicit AnchorTracker(double cutoffHz = 50.0) : filter_(cutoffHz) {}

  AnchorState update(double t, const std::optional<Vector3> & position);

  bool hasAnchor() const noexcept
  {
    return last_.has_value();
  }

private:
  VectorDifferentiator differentiator_;
  LowPassFilter filter_;
  std::optional<Vector3> last_;
  std::optional<double> lastTime_;
};

/// Full online pipeline producing y_v from encoder poses and an anchor stream:
/// rebases the IMU position on the anchor, differentiates pose and anchor,
/// then applies velocityMovingAnchor.
class VelocityReconstructor
{
public:
  struct Output
  {
    Vector3 yv;
    KinematicSample kinematics;
    AnchorState anchor;
  };

  explicit VelocityReconstructor(double anchorVelocityCutoffHz = 50.0) : anchor_(anchorVelocityCutoffHz) {}

  /// pImuReference and rCL come from forward kinematics in the control
  /// reference; anchorPosition is nullopt during flight.
  Output update(double t,
                const Vector3 & pImuReference,
                const Rotation & rCL,
                const std::optional<Vector3> & anchorPosition,
                const Vector3 & gyro);

private:
  AnchorTracker anchor_;
  VectorDifferentiator position_;
  RotationDifferentiator orientation_;
};

} // namespace tiltobs
