#include "analysis/convergence.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "common/error.hpp"

namespace tiltobs
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector3 gaussianDirection(std::mt19937_64 & rng)
{
  std::normal_distribution<double> normal;
  Vector3 v;
  do
  {
    v = Vector3(normal(rng), normal(rng), normal(rng));
  } while(v.norm() < 1e-12);
  return v.normalized();
}

Vector3 uniformInBall(std::mt19937_64 & rng, double radius)
{
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Vector3 direction = gaussianDirection(rng);
  return direction * (radius * std::cbrt(uniform(rng)));
}

double secondsSince(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

double measureConvergenceRate(std::span<const double> t, std::span<const double> norms, double tBegin, double tEnd)
{
  if(t.size() != norms.size())
  {
    throw Error(ErrorCode::InvalidArgument, "time and norm histories differ in length");
  }
  double n = 0.0;
  double sumT = 0.0;
  double sumY = 0.0;
  double sumTT = 0.0;
  double sumTY = 0.0;
  for(std::size_t i = 0; i < t.size(); ++i)
  {
    if(t[i] < tBegin || t[i] > tEnd || !(norms[i] >= 1e-12))
    {
      continue;
    }
    const double y = std::log(norms[i]);
    n += 1.0;
    sumT += t[i];
    sumY += y;
    sumTT += t[i] * t[i];
    sumTY += t[i] * y;
  }
  const double denominator = n * sumTT - sumT * sumT;
  if(n < 2.0 || !(denominator > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "convergence window holds fewer than two usable samples");
  }
  const double slope = (n * sumTY - sumT * sumY) / denominator;
  return -slope;
}

ErrorState InitialErrorSampler::sample(std::uint64_t seed, std::uint64_t index) const
{
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  ErrorState xi;
  xi.z1 = uniformInBall(rng, ballRadius);
  xi.z2p = uniformInBall(rng, ballRadius);
  Vector3 u;
  do
  {
    u = gaussianDirection(rng);
  } while(std::acos(std::clamp(-u.z(), -1.0, 1.0)) < capRadius);
  xi.z2 = Vector3::UnitZ() - u;
  return xi;
}

SweepSummary almostGlobalSweep(const Gains & k, GravityConstant g0, const SweepSettings & settings)
{
  k.validate();
  if(settings.samples == 0 || !(settings.dt > 0.0) || !(settings.horizon > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "sweep needs samples > 0, dt > 0 and horizon > 0");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto steps = static_cast<std::uint64_t>(std::llround(settings.horizon / settings.dt));

  SweepSummary summary;
  summary.samples = settings.samples;
  summary.outcomes.resize(settings.samples);

  parallelFor(settings.samples, settings.threads, [&](std::size_t i) {
    SweepOutcome & outcome = summary.outcomes[i];
    outcome.initial = settings.sampler.sample(settings.seed, i);
    ErrorState xi = outcome.initial;
    const double tol2 = settings.tolerance * settings.tolerance;
    for(std::uint64_t s = 0; s < steps; ++s)
    {
      if(xi.z1.squaredNorm() + xi.z2p.squaredNorm() + xi.z2.squaredNorm() < tol2)
      {
        outcome.convergenceTime = static_cast<double>(s) * settings.dt;
        break;
      }
      xi = errorEulerStep(xi, k, g0, settings.dt);
    }
    if(!outcome.convergenceTime && xi.norm() < settings.tolerance)
    {
      outcome.convergenceTime = static_cast<double>(steps) * settings.dt;
    }
    outcome.finalNorm = xi.norm();
  });

  for(std::size_t i = 0; i < summary.outcomes.size(); ++i)
  {
    const SweepOutcome & o = summary.outcomes[i];
    if(o.convergenceTime)
    {
      ++summary.converged;
      summary.slowestConvergenceTime = std::max(summary.slowestConvergenceTime, *o.convergenceTime);
    }
    if(o.finalNorm >= summary.maxFinalNorm)
    {
      summary.maxFinalNorm = o.finalNorm;
      summary.worstIndex = i;
    }
  }
  summary.elapsedSeconds = secondsSince(start);
  return summary;
}

LyapunovSweepSummary lyapunovSweep(const Gains & k, GravityConstant g0, const LyapunovSweepSettings & settings)
{
  k.validate();
  if(settings.trajectories == 0 || !(settings.dt > 0.0) || !(settings.horizon > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "Lyapunov sweep needs trajectories > 0, dt > 0 and horizon > 0");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto steps = static_cast<std::uint64_t>(std::llround(settings.horizon / settings.dt));

  struct Partial
  {
    std::uint64_t increases = 0;
    std::uint64_t violations = 0;
    double maxGap = -1e300;
    double maxRelativeIncrease = 0.0;
  };
  std::vector<Partial> partials(settings.trajectories);

  const Matrix3 h = lyapunovBoundMatrix(k, g0);
  const double floor2 = settings.normFloor * settings.normFloor;

  parallelFor(settings.trajectories, settings.threads, [&](std::size_t i) {
    Partial & p = partials[i];
    ErrorState xi = settings.sampler.sample(settings.seed, i);
    double v = lyapunovV(xi, k, g0);
    for(std::uint64_t s = 0; s < steps; ++s)
    {
      const ErrorDerivative flow = errorDerivative(xi, k, g0);
      const ErrorDerivative grad = lyapunovGradient(xi, k, g0);
      const double vdot = grad.dz1.dot(flow.dz1) + grad.dz2p.dot(flow.dz2p) + grad.dz2.dot(flow.dz2);

      const double n1 = xi.z1.squaredNorm();
      const double n2 = xi.z2p.squaredNorm();
      const double nw = xi.z2.x() * xi.z2.x() + xi.z2.y() * xi.z2.y(); // |e_z x z2|^2
      const double bound = -(h(0, 0) * n1 + h(1, 1) * n2 + 2.0 * h(1, 2) * std::sqrt(n2 * nw) + h(2, 2) * nw);
      const double gap = vdot - bound;
      if(gap > settings.boundSlack)
      {
        ++p.violations;
      }
      p.maxGap = std::max(p.maxGap, gap);

      ErrorState next{xi.z1 + settings.dt * flow.dz1, xi.z2p + settings.dt * flow.dz2p, xi.z2 + settings.dt * flow.dz2};
      projectOnSphere(next);
      const double vNext = lyapunovV(next, k, g0);
      if(vNext > v && n1 + n2 + xi.z2.squaredNorm() > floor2)
      {
        ++p.increases;
        p.maxRelativeIncrease = std::max(p.maxRelativeIncrease, (vNext - v) / v);
      }
      xi = next;
      v = vNext;
    }
  });

  LyapunovSweepSummary summary;
  summary.trajectories = settings.trajectories;
  summary.steps = steps * settings.trajectories;
  for(const Partial & p : partials)
  {
    summary.increases += p.increases;
    summary.boundViolations += p.violations;
    summary.maxVdotMinusBound = std::max(summary.maxVdotMinusBound, p.maxGap);
    summary.maxRelativeIncrease = std::max(summary.maxRelativeIncrease, p.maxRelativeIncrease);
  }
  summary.elapsedSeconds = secondsSince(start);
  return summary;
}

} // namespace tiltobs
