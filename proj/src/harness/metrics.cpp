#include "harness/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "analysis/convergence.hpp"
#include "common/error.hpp"

namespace tiltobs
{

WindowStats windowStats(const std::vector<double> & t, const std::vector<double> & series, TimeWindow window)
{
  WindowStats out;
  double sum = 0.0;
  for(std::size_t i = 0; i < t.size(); ++i)
  {
    if(t[i] >= window.begin && t[i] < window.end)
    {
      sum += series[i];
      ++out.count;
    }
  }
  if(out.count == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "statistics window holds no samples");
  }
  out.mean = sum / static_cast<double>(out.count);
  double sq = 0.0;
  for(std::size_t i = 0; i < t.size(); ++i)
  {
    if(t[i] >= window.begin && t[i] < window.end)
    {
      sq += (series[i] - out.mean) * (series[i] - out.mean);
    }
  }
  out.sd = std::sqrt(sq / static_cast<double>(out.count));
  return out;
}

std::optional<double> settleTime(const std::vector<double> & t,
                                 const std::vector<double> & series,
                                 double threshold,
                                 double tEnd)
{
  std::optional<double> candidate;
  for(std::size_t i = 0; i < t.size() && t[i] < tEnd; ++i)
  {
    if(series[i] < threshold)
    {
      if(!candidate)
      {
        candidate = t[i];
      }
    }
    else
    {
      candidate.reset();
    }
  }
  return candidate;
}

ScenarioMetrics computeMetrics(const TrajectoryLog & log,
                               const Scenario & s,
                               TimeWindow window,
                               const TrajectoryLog * noPush)
{
  if(noPush && noPush->ticks.t != log.ticks.t)
  {
    throw Error(ErrorCode::InvalidArgument, "no-push reference does not share the tick grid of the run");
  }
  const TickSeries & ticks = log.ticks;
  ScenarioMetrics m;
  m.preEventEnd = s.duration;
  double lastPush = -1.0;
  for(const PushEvent & p : s.pushes)
  {
    m.preEventEnd = std::min(m.preEventEnd, p.tStart);
    lastPush = std::max(lastPush, p.tStart);
  }

  m.convergenceTime = settleTime(ticks.t, ticks.errAngle, kConvergenceThreshold, m.preEventEnd);
  if(m.convergenceTime)
  {
    m.postConvergenceRms = 0.0;
    std::size_t n = 0;
    for(std::size_t i = 0; i < ticks.t.size() && ticks.t[i] < m.preEventEnd; ++i)
    {
      if(ticks.t[i] >= *m.convergenceTime)
      {
        *m.postConvergenceRms += ticks.errAngle[i] * ticks.errAngle[i];
        ++n;
      }
    }
    *m.postConvergenceRms = std::sqrt(*m.postConvergenceRms / static_cast<double>(std::max<std::size_t>(n, 1)));
  }

  const TimeWindow clipped{window.begin, std::min(window.end, s.duration)};
  if(clipped.end > clipped.begin)
  {
    const WindowStats w = windowStats(ticks.t, ticks.errAngle, clipped);
    m.windowMeanError = w.mean;
    m.windowErrorSd = w.sd;
  }

  try
  {
    m.measuredRate = measureConvergenceRate(ticks.t, ticks.errAngle, 0.5, m.preEventEnd);
  }
  catch(const Error &)
  {
    m.measuredRate.reset();
  }

  for(std::size_t i = 1; i < ticks.t.size() && ticks.t[i] < m.preEventEnd; ++i)
  {
    if(ticks.lyapunovV[i] > ticks.lyapunovV[i - 1] * (1.0 + 1e-12))
    {
      ++m.lyapunovIncreases;
    }
  }

  if(!s.pushes.empty())
  {
    const double first = m.preEventEnd;
    double next = s.duration;
    for(const PushEvent & p : s.pushes)
    {
      if(p.tStart > first)
      {
        next = std::min(next, p.tStart);
      }
    }
    std::optional<double> atPush;
    double peak = 0.0;
    for(std::size_t i = 0; i < ticks.t.size(); ++i)
    {
      if(ticks.t[i] < first || ticks.t[i] >= next)
      {
        continue;
      }
      if(!atPush)
      {
        atPush = ticks.errAngle[i];
      }
      const double base = noPush ? noPush->ticks.errAngle[i] : *atPush;
      peak = std::max(peak, ticks.errAngle[i] - base);
    }
    if(atPush)
    {
      m.firstPushBump = peak;
    }
    double fall = 0.0;
    bool any = false;
    for(std::size_t i = 0; i < ticks.t.size(); ++i)
    {
      if(ticks.t[i] >= lastPush)
      {
        fall = std::max(fall, ticks.errAngle[i]);
        any = true;
      }
    }
    if(any)
    {
      m.fallMaxError = fall;
    }
  }

  for(std::size_t i = 0; i < ticks.t.size(); ++i)
  {
    m.maxError = std::max(m.maxError, ticks.errAngle[i]);
    m.maxVelocityError = std::max(m.maxVelocityError, ticks.velocityError[i]);
    m.maxX2HatNormDeviation = std::max(m.maxX2HatNormDeviation, ticks.x2HatNormDeviation[i]);
    m.maxX2pHatNormDeviation = std::max(m.maxX2pHatNormDeviation, ticks.x2pHatNormDeviation[i]);
    m.flightTicks += ticks.inFlight[i];
  }
  return m;
}

} // namespace tiltobs
