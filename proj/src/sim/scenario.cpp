#include "sim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "analysis/error_dynamics.hpp"
#include "common/error.hpp"

namespace tiltobs
{

namespace
{

constexpr const char * kVersion = "0.1.0";

bool isMultiple(double big, double small)
{
  const double ratio = big / small;
  return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
}

void hexField(std::ostringstream & os, const char * key, double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", value);
  os << key << '=' << buf << ';';
}

void hexField(std::ostringstream & os, const char * key, const Vector3 & v)
{
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%a,%a,%a", v.x(), v.y(), v.z());
  os << key << '=' << buf << ';';
}

void hexField(std::ostringstream & os, const char * key, const Rotation & r)
{
  os << key << '=';
  for(int i = 0; i < 3; ++i)
  {
    for(int j = 0; j < 3; ++j)
    {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%a,", r.matrix()(i, j));
      os << buf;
    }
  }
  os << ';';
}

void appendNumber(std::string & out, double value)
{
  char buf[40];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", value);
  out.append(buf, static_cast<std::size_t>(n));
}

} // namespace

const char * libraryVersion()
{
  return kVersion;
}

std::string toString(AnchorSource source)
{
  return source == AnchorSource::Zmp ? "zmp" : "feet";
}

AnchorSource anchorSourceFromString(const std::string & name)
{
  if(name == "zmp")
  {
    return AnchorSource::Zmp;
  }
  if(name == "feet")
  {
    return AnchorSource::Feet;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown anchor source '" + name + "' (expected zmp or feet)");
}

std::vector<PushEvent> Scenario::standardPushes()
{
  const Vector3 point(0.0, 0.0, 0.35);
  return {PushEvent{4.0, 0.1, Vector3(100.0, 0.0, 0.0), point}, PushEvent{14.0, 0.1, Vector3(300.0, 0.0, 0.0), point}};
}

void Scenario::validate() const
{
  gains.validate();
  static_cast<void>(GravityConstant(g0));
  contact.validate();
  noise.validate();
  if(!(body.mass > 0.0) || !(body.inertia.minCoeff() > 0.0) || !isFinite(body.inertia))
  {
    throw Error(ErrorCode::InvalidArgument, "body mass and inertia must be positive");
  }
  if(!(duration > 0.0) || !std::isfinite(duration))
  {
    throw Error(ErrorCode::InvalidArgument, "duration must be positive");
  }
  if(!(dtSim > 0.0) || !(dtControl > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "time steps must be positive");
  }
  if(dtSim > dtControl * (1.0 + 1e-12))
  {
    throw Error(ErrorCode::InvalidArgument, "dt_sim must not exceed dt_control");
  }
  if(!isMultiple(dtControl, dtSim))
  {
    throw Error(ErrorCode::InvalidArgument, "dt_control must be an integer multiple of dt_sim");
  }
  checkEulerStability(gains, dtControl);
  if(!(logCadenceHz > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "log cadence must be positive");
  }
  if(logCadenceHz * dtControl > 1.0 + 1e-12)
  {
    throw Error(ErrorCode::InvalidArgument, "log cadence exceeds the control rate");
  }
  if(!std::isfinite(initialErrorAngle) || !isFinite(initialErrorAxis) || initialErrorAxis.norm() < 1e-9)
  {
    throw Error(ErrorCode::InvalidArgument, "initial error axis must be a finite non-zero vector");
  }
  for(const PushEvent & push : pushes)
  {
    if(!(push.duration > 0.0) || !isFinite(push.force) || !isFinite(push.point) || !std::isfinite(push.tStart))
    {
      throw Error(ErrorCode::InvalidArgument, "push events need a positive duration and finite force and point");
    }
  }
  if(std::isnan(anchorVelocityCutoffHz))
  {
    throw Error(ErrorCode::NonFinite, "anchor velocity cutoff is not a number");
  }
}

std::size_t Scenario::controlTicks() const
{
  return static_cast<std::size_t>(std::llround(duration / dtControl));
}

std::size_t Scenario::substeps() const
{
  return static_cast<std::size_t>(std::llround(dtControl / dtSim));
}

RigidBodyState Scenario::startState() const
{
  if(initialState)
  {
    return *initialState;
  }
  double lowest = 0.0;
  for(const ContactPoint & c : contact.points)
  {
    lowest = std::min(lowest, c.offset.z());
  }
  int supporting = 0;
  for(const ContactPoint & c : contact.points)
  {
    supporting += std::abs(c.offset.z() - lowest) < 1e-12 ? 1 : 0;
  }
  const double sink = body.mass * g0 / (contact.stiffness * supporting);
  RigidBodyState s;
  s.r = Rotation::aboutZ(initialYaw);
  s.p = Vector3(0.0, 0.0, -lowest - sink);
  return s;
}

std::string Scenario::canonical() const
{
  std::ostringstream os;
  os << "name=" << name << ';';
  hexField(os, "mass", body.mass);
  hexField(os, "inertia", body.inertia);
  hexField(os, "k", contact.stiffness);
  hexField(os, "c", contact.damping);
  hexField(os, "kt", contact.tangentialStiffness);
  hexField(os, "ct", contact.tangentialDamping);
  for(const ContactPoint & p : contact.points)
  {
    hexField(os, "point", p.offset);
    os << "group=" << static_cast<int>(p.group) << ';';
  }
  hexField(os, "imu_pos", imu.position);
  hexField(os, "imu_rot", imu.orientation);
  hexField(os, "imu_amp", imu.motionAmplitude);
  hexField(os, "imu_ang", imu.motionAngle);
  hexField(os, "imu_freq", imu.motionFrequency);
  for(const PushEvent & p : pushes)
  {
    hexField(os, "push_t", p.tStart);
    hexField(os, "push_d", p.duration);
    hexField(os, "push_f", p.force);
    hexField(os, "push_p", p.point);
  }
  hexField(os, "gyro_sd", noise.gyroSd);
  hexField(os, "accel_sd", noise.accelSd);
  os << "seed=" << noise.seed << ';';
  hexField(os, "a1", gains.alpha1);
  hexField(os, "a2", gains.alpha2);
  hexField(os, "gamma", gains.gamma);
  hexField(os, "g0", g0);
  hexField(os, "duration", duration);
  hexField(os, "dt_sim", dtSim);
  hexField(os, "dt_control", dtControl);
  hexField(os, "err_angle", initialErrorAngle);
  hexField(os, "err_axis", initialErrorAxis);
  hexField(os, "yaw", initialYaw);
  if(initialState)
  {
    hexField(os, "p0", initialState->p);
    hexField(os, "r0", initialState->r);
    hexField(os, "v0", initialState->v);
    hexField(os, "w0", initialState->omega);
  }
  os << "anchor=" << toString(anchorSource) << ';';
  hexField(os, "anchor_fc", anchorVelocityCutoffHz);
  hexField(os, "cadence", logCadenceHz);
  return os.str();
}

std::uint64_t Scenario::hash() const
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for(const unsigned char c : canonical())
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double angleBetween(const Vector3 & a, const Vector3 & b)
{
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

UnitVector3 initialTiltGuess(const Scenario & s, const Vector3 & trueTilt)
{
  const Vector3 axis = s.initialErrorAxis.normalized();
  return UnitVector3::normalized(Rotation::exp(axis * s.initialErrorAngle) * trueTilt);
}

void simulateMeasurements(const Scenario & s, const std::function<void(const ControlTick &)> & onTick)
{
  s.validate();
  const std::size_t ticks = s.controlTicks();
  const std::size_t substeps = s.substeps();
  const double dtSim = s.dtControl / static_cast<double>(substeps);

  RigidBodyState state = s.startState();
  TangentialAnchors anchors;
  ImuNoise noise(s.noise);
  VelocityReconstructor reconstructor(s.anchorVelocityCutoffHz);

  for(std::size_t k = 0; k < ticks; ++k)
  {
    const double t = static_cast<double>(k) * s.dtControl;
    ContactForces contacts = contactForces(state, s.contact, anchors);
    Accelerations acc = bodyAccelerations(state, s.body, contacts, s.pushes, t, s.g0);

    ControlTick tick;
    tick.index = k;
    tick.t = t;
    tick.truth = imuTruth(state, acc, s.imu, t);
    tick.imu = imuMeasure(tick.truth, s.g0, &noise, t);
    tick.encoder = kinematicMeasure(state, s.imu, t, contacts.zmp);
    if(s.anchorSource == AnchorSource::Feet)
    {
      tick.encoder.anchor = footAnchor(state, s.contact, contacts);
    }
    const VelocityReconstructor::Output out =
        reconstructor.update(t, tick.encoder.pImuReference, tick.encoder.rCL, tick.encoder.anchor, tick.imu.gyro);
    tick.yv = out.yv;
    tick.anchor = out.anchor;
    tick.inFlight = !tick.encoder.anchor.has_value();
    tick.body = &state;
    tick.contacts = &contacts;
    onTick(tick);

    for(std::size_t j = 0; j < substeps; ++j)
    {
      const double ts = t + static_cast<double>(j) * dtSim;
      if(j > 0)
      {
        contacts = contactForces(state, s.contact, anchors);
        acc = bodyAccelerations(state, s.body, contacts, s.pushes, ts, s.g0);
      }
      state = dynamicsStep(state, acc, dtSim, ts);
    }
  }
}

TrajectoryLog runScenario(const Scenario & s, TiltObserver::Mode mode)
{
  s.validate();
  TrajectoryLog log;
  log.version = kVersion;
  log.scenarioName = s.name;
  log.scenarioHash = s.hash();
  log.gains = s.gains;
  log.seed = s.noise.seed;

  const std::size_t ticks = s.controlTicks();
  const auto stride = static_cast<std::size_t>(std::max<long long>(1, std::llround(1.0 / (s.logCadenceHz * s.dtControl))));
  log.rows.reserve(ticks / stride + 1);
  TickSeries & series = log.ticks;
  series.t.reserve(ticks);
  series.errAngle.reserve(ticks);
  series.lyapunovV.reserve(ticks);
  series.velocityError.reserve(ticks);
  series.x2HatNormDeviation.reserve(ticks);
  series.x2pHatNormDeviation.reserve(ticks);
  series.inFlight.reserve(ticks);

  TiltObserver observer(s.gains, GravityConstant(s.g0), mode);
  const GravityConstant g0(s.g0);

  simulateMeasurements(s, [&](const ControlTick & tick) {
    if(tick.index == 0)
    {
      observer.reset(tick.yv, initialTiltGuess(s, tick.truth.tilt));
    }
    const ObserverState & est = observer.state();
    const Vector3 tiltHat = observer.tiltEstimate().vec();
    ObserverState shown = est;
    shown.x2Hat = UnitVector3::normalized(tiltHat);
    const ErrorState xi = errorFromObserver(shown, tick.truth.localVelocity, tick.truth.orientation);
    const double err = angleBetween(tiltHat, tick.truth.tilt);
    const double v = lyapunovV(xi, s.gains, g0);

    series.t.push_back(tick.t);
    series.errAngle.push_back(err);
    series.lyapunovV.push_back(v);
    series.velocityError.push_back((tick.yv - tick.truth.localVelocity).norm());
    series.x2HatNormDeviation.push_back(std::abs(est.x2Hat.vec().norm() - 1.0));
    series.x2pHatNormDeviation.push_back(std::abs(est.x2PrimeHat.norm() - 1.0));
    series.inFlight.push_back(tick.inFlight ? 1 : 0);

    if(tick.index % stride == 0)
    {
      log.rows.push_back(TrajectoryRow{tick.t, tick.truth.tilt, tick.imu.gyro, tick.imu.accel, tick.yv, est.x1Hat,
                                       est.x2PrimeHat, tiltHat, err, v});
    }
    observer.update(tick.imu, tick.yv, s.dtControl);
  });
  return log;
}

const std::vector<std::string> & TrajectoryLog::columns()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out{"t"};
    for(const char * group : {"x2_true", "y_g", "y_a", "y_v", "x1hat", "x2phat", "x2hat"})
    {
      for(const char * axis : {"x", "y", "z"})
      {
        out.push_back(std::string(group) + "_" + axis);
      }
    }
    out.emplace_back("err_angle_rad");
    out.emplace_back("lyapunov_V");
    return out;
  }();
  return names;
}

std::string TrajectoryLog::headerLine() const
{
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(scenarioHash));
  std::string out = "# tiltobs-log format=1 version=";
  out += version;
  out += " scenario=" + scenarioName;
  out += " scenario_hash=";
  out += hash;
  out += " gains=";
  appendNumber(out, gains.alpha1);
  out += ',';
  appendNumber(out, gains.alpha2);
  out += ',';
  appendNumber(out, gains.gamma);
  out += " seed=" + std::to_string(seed);
  return out;
}

void TrajectoryLog::writeCsv(std::ostream & os) const
{
  os << headerLine() << '\n';
  const auto & names = columns();
  for(std::size_t i = 0; i < names.size(); ++i)
  {
    os << (i ? "," : "") << names[i];
  }
  os << '\n';
  std::string line;
  for(const TrajectoryRow & r : rows)
  {
    line.clear();
    appendNumber(line, r.t);
    for(const Vector3 * v : {&r.x2True, &r.yg, &r.ya, &r.yv, &r.x1Hat, &r.x2pHat, &r.x2Hat})
    {
      for(int i = 0; i < 3; ++i)
      {
        line += ',';
        appendNumber(line, (*v)(i));
      }
    }
    line += ',';
    appendNumber(line, r.errAngle);
    line += ',';
    appendNumber(line, r.lyapunovV);
    line += '\n';
    os << line;
  }
}

} // namespace tiltobs
