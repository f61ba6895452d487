#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "geometry/geometry.hpp"
#include "oracles.hpp"

using namespace tiltobs;

namespace
{

Vector3 randomVector(std::mt19937_64 & rng, double scale = 1.0)
{
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

double maxOrthoError(const Matrix3 & r)
{
  return (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

} // namespace

TEST(Skew, ZeroVectorGivesZeroMatrix)
{
  EXPECT_TRUE(skew(Vector3::Zero()).isZero(0.0));
}

TEST(Skew, EzCrossEx)
{
  EXPECT_TRUE((skew(Vector3::UnitZ()) * Vector3::UnitX()).isApprox(Vector3::UnitY(), 0.0));
}

TEST(Skew, MatchesCrossProductAndIsAntisymmetric)
{
  std::mt19937_64 rng(11);
  for(int i = 0; i < 1000; ++i)
  {
    const Vector3 v = randomVector(rng, 3.0);
    const Vector3 w = randomVector(rng, 3.0);
    const Vector3 c(v.y() * w.z() - v.z() * w.y(), v.z() * w.x() - v.x() * w.z(), v.x() * w.y() - v.y() * w.x());
    EXPECT_LT((skew(v) * w - c).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE((skew(v).transpose() + skew(v)).isZero(0.0));
  }
}

TEST(Skew, Linear)
{
  std::mt19937_64 rng(12);
  for(int i = 0; i < 1000; ++i)
  {
    const Vector3 u = randomVector(rng);
    const Vector3 v = randomVector(rng);
    const double a = 2.5 * randomVector(rng).x();
    const double b = 2.5 * randomVector(rng).x();
    EXPECT_LT((skew(a * u + b * v) - a * skew(u) - b * skew(v)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Skew, SquareIdentityOnUnitVectors)
{
  std::mt19937_64 rng(13);
  for(int i = 0; i < 1000; ++i)
  {
    const Vector3 u = randomVector(rng).normalized();
    const Vector3 w = randomVector(rng, 2.0);
    const Vector3 lhs = skew(u) * skew(u) * w;
    const Vector3 rhs = u * u.dot(w) - w;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(UnitVector, DefaultIsEz)
{
  EXPECT_EQ(UnitVector3().vec(), Vector3::UnitZ());
}

TEST(UnitVector, NormalizesAndRejectsZero)
{
  EXPECT_NEAR(UnitVector3::normalized(Vector3(3, 4, 12)).vec().norm(), 1.0, 1e-15);
  EXPECT_THROW(UnitVector3::normalized(Vector3::Zero()), Error);
  EXPECT_THROW(UnitVector3::normalized(Vector3(NAN, 0, 1)), Error);
}

TEST(UnitVector, FromUnitChecksNorm)
{
  EXPECT_NO_THROW(UnitVector3::fromUnit(Vector3(0, 0, 1.0 + 1e-10)));
  EXPECT_THROW(UnitVector3::fromUnit(Vector3(0, 0, 1.001)), Error);
}

TEST(Rotation, FromMatrixValidates)
{
  EXPECT_NO_THROW(Rotation::fromMatrix(Matrix3::Identity()));
  EXPECT_THROW(Rotation::fromMatrix(2.0 * Matrix3::Identity()), Error);
  Matrix3 reflection = Matrix3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(Rotation::fromMatrix(reflection), Error);
}

TEST(Rotation, ExpMatchesAngleAxis)
{
  std::mt19937_64 rng(14);
  for(int i = 0; i < 500; ++i)
  {
    const Vector3 w = randomVector(rng, 1.5);
    const Matrix3 expected = oracle::axisAngle(w, w.norm());
    EXPECT_LT((Rotation::exp(w).matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_TRUE(Rotation::exp(Vector3::Zero()).matrix().isIdentity(0.0));
}

TEST(Rotation, LogInvertsExp)
{
  std::mt19937_64 rng(15);
  for(int i = 0; i < 500; ++i)
  {
    Vector3 w = randomVector(rng);
    if(w.norm() > 3.0)
    {
      w *= 3.0 / w.norm();
    }
    EXPECT_LT((Rotation::exp(w).log() - w).norm(), 1e-9);
  }
  const Vector3 half = Rotation::aboutZ(std::numbers::pi).log();
  EXPECT_NEAR(half.norm(), std::numbers::pi, 1e-12);
  EXPECT_NEAR(std::abs(half.z()), std::numbers::pi, 1e-12);
}

TEST(Rotation, YawOfElementaryRotations)
{
  EXPECT_NEAR(Rotation::aboutZ(0.7).yaw(), 0.7, 1e-15);
  EXPECT_NEAR((Rotation::aboutZ(-1.2) * Rotation::aboutX(0.3)).yaw(), -1.2, 1e-15);
}

TEST(Rotation, TwistRecoversHeadingBehindSwing)
{
  std::mt19937_64 rng(16);
  for(int i = 0; i < 500; ++i)
  {
    Vector3 axis = randomVector(rng);
    axis.z() = 0.0;
    const double psi = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const double tilt = std::uniform_real_distribution<double>(0.0, 2.5)(rng);
    const Rotation swing = Rotation::exp(axis.normalized() * tilt);
    const double got = (swing * Rotation::aboutZ(psi)).twist();
    EXPECT_NEAR(std::remainder(got - psi, 2.0 * std::numbers::pi), 0.0, 1e-9);
  }
}

// Pitching through 90 degrees: yaw() jumps by pi, twist() does not.
TEST(Rotation, TwistContinuousThroughVerticalXAxis)
{
  const Rotation before = Rotation::aboutZ(0.4) * Rotation::aboutY(std::numbers::pi / 2 - 1e-6);
  const Rotation after = Rotation::aboutZ(0.4) * Rotation::aboutY(std::numbers::pi / 2 + 1e-6);
  EXPECT_GT(std::abs(std::remainder(after.yaw() - before.yaw(), 2 * std::numbers::pi)), 3.0);
  EXPECT_NEAR(after.twist(), before.twist(), 1e-5);
}

TEST(RotateStep, ZeroRateIsIdentity)
{
  EXPECT_TRUE(rotateStep(Rotation(), Vector3::Zero(), 1e-3).matrix().isIdentity(0.0));
}

TEST(RotateStep, HalfTurnAboutZ)
{
  const Matrix3 r = rotateStep(Rotation(), Vector3(0, 0, std::numbers::pi), 1.0).matrix();
  EXPECT_LT((r - Vector3(-1, -1, 1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RotateStep, ComposedStepsMatchFineIntegration)
{
  const Vector3 w(0.1, 0.2, 0.3);
  Rotation r;
  for(int i = 0; i < 1000; ++i)
  {
    r = rotateStep(r, w, 1e-3);
  }
  // Rdot = R S(w) integrated with RK4 on the 9 matrix entries
  const oracle::Rhs f = [&](const oracle::Vec & x) {
    const Eigen::Map<const Matrix3> m(x.data());
    const Matrix3 d = m * (Matrix3() << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0).finished();
    return oracle::Vec(Eigen::Map<const oracle::Vec>(d.data(), 9));
  };
  const Matrix3 id = Matrix3::Identity();
  const oracle::Vec ref = oracle::rk4(f, Eigen::Map<const oracle::Vec>(id.data(), 9), 1e-5, 100000);
  EXPECT_LT((r.matrix() - Eigen::Map<const Matrix3>(ref.data())).norm(), 1e-8);
}

TEST(RotateStep, StaysOrthonormalOverManySteps)
{
  std::mt19937_64 rng(16);
  Rotation r;
  double worst = 0.0;
  for(int i = 0; i < 100000; ++i)
  {
    r = rotateStep(r, randomVector(rng, 5.0), 1e-2);
    worst = std::max(worst, maxOrthoError(r.matrix()));
  }
  EXPECT_LT(worst, 1e-9);
  EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-9);
}

TEST(SphereStep, FixedPoint)
{
  EXPECT_EQ(sphereStep(UnitVector3(), Vector3::Zero(), 1e-3).vec(), Vector3::UnitZ());
}

TEST(SphereStep, OutputHasUnitNorm)
{
  EXPECT_NEAR(sphereStep(UnitVector3(), Vector3(1e-3, 0, 0), 1e-3).vec().norm(), 1.0, 1e-15);
  std::mt19937_64 rng(17);
  for(int i = 0; i < 10000; ++i)
  {
    const UnitVector3 u = UnitVector3::normalized(randomVector(rng));
    EXPECT_NEAR(sphereStep(u, randomVector(rng, 10.0), 1e-2).vec().norm(), 1.0, 1e-12);
  }
}

TEST(SphereStep, SecondOrderCloseToExactRotation)
{
  const UnitVector3 ex = UnitVector3::normalized(Vector3::UnitX());
  const Vector3 udot = -skew(Vector3::UnitZ()) * ex.vec();
  for(const double dt : {1e-2, 1e-3, 1e-4})
  {
    const Vector3 exact = oracle::axisAngle(Vector3::UnitZ(), -dt) * Vector3::UnitX();
    const double err = (sphereStep(ex, udot, dt).vec() - exact).norm();
    EXPECT_LT(err, dt * dt);
  }
}

TEST(SphereStep, DegenerateStepRejected)
{
  EXPECT_THROW(sphereStep(UnitVector3(), Vector3(0, 0, -1), 1.0), Error);
}
