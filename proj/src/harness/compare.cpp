#include "harness/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>

namespace tiltobs
{

namespace
{

class StreamDigest
{
public:
  void add(const Vector3 & v)
  {
    for(int i = 0; i < 3; ++i)
    {
      unsigned char bytes[sizeof(double)];
      const double x = v(i);
      std::memcpy(bytes, &x, sizeof(double));
      for(unsigned char b : bytes)
      {
        h_ ^= b;
        h_ *= 0x100000001b3ULL;
      }
    }
  }

  std::uint64_t value() const
  {
    return h_;
  }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

} // namespace

ComparisonReport compareEstimators(const Scenario & s, TimeWindow window)
{
  s.validate();
  ComparisonReport report;
  report.window = {window.begin, std::min(window.end, s.duration)};
  const std::size_t n = s.controlTicks();
  report.t.reserve(n);
  report.fullError.reserve(n);
  report.intermediateError.reserve(n);
  report.x2HatNorm.reserve(n);
  report.x2pHatNorm.reserve(n);

  const GravityConstant g0(s.g0);
  TiltObserver full(s.gains, g0, TiltObserver::Mode::Full);
  TiltObserver intermediate(s.gains, g0, TiltObserver::Mode::Intermediate);
  StreamDigest fullDigest;
  StreamDigest intermediateDigest;

  auto feed = [&](TiltObserver & observer, StreamDigest & digest, const ControlTick & tick) {
    digest.add(tick.imu.gyro);
    digest.add(tick.imu.accel);
    digest.add(tick.yv);
    observer.update(tick.imu, tick.yv, s.dtControl);
  };

  simulateMeasurements(s, [&](const ControlTick & tick) {
    if(tick.index == 0)
    {
      const UnitVector3 guess = initialTiltGuess(s, tick.truth.tilt);
      full.reset(tick.yv, guess);
      intermediate.reset(tick.yv, guess);
    }
    const Vector3 & x2 = tick.truth.tilt;
    const double x2HatNorm = full.state().x2Hat.vec().norm();
    const double x2pHatNorm = intermediate.state().x2PrimeHat.norm();
    report.t.push_back(tick.t);
    report.fullError.push_back(angleBetween(full.state().x2Hat.vec(), x2));
    report.intermediateError.push_back(angleBetween(intermediate.state().x2PrimeHat, x2));
    report.x2HatNorm.push_back(x2HatNorm);
    report.x2pHatNorm.push_back(x2pHatNorm);
    report.maxX2HatNormDeviation = std::max(report.maxX2HatNormDeviation, std::abs(x2HatNorm - 1.0));
    report.maxX2pHatNormDeviation = std::max(report.maxX2pHatNormDeviation, std::abs(x2pHatNorm - 1.0));

    feed(full, fullDigest, tick);
    feed(intermediate, intermediateDigest, tick);
  });

  report.full = windowStats(report.t, report.fullError, report.window);
  report.intermediate = windowStats(report.t, report.intermediateError, report.window);
  report.fullStreamDigest = fullDigest.value();
  report.intermediateStreamDigest = intermediateDigest.value();
  return report;
}

void ComparisonReport::writeCsv(std::ostream & os, std::size_t stride) const
{
  stride = std::max<std::size_t>(stride, 1);
  os << "t,err_full_rad,err_intermediate_rad,x2hat_norm,x2phat_norm\n";
  char line[160];
  for(std::size_t i = 0; i < t.size(); i += stride)
  {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t[i], fullError[i], intermediateError[i],
                  x2HatNorm[i], x2pHatNorm[i]);
    os << line;
  }
}

} // namespace tiltobs
