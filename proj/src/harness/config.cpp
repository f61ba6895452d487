#include "harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "common/error.hpp"

namespace tiltobs
{

namespace
{

namespace pt = boost::property_tree;

[[noreturn]] void fieldError(const std::string & section, const std::string & key, const std::string & what)
{
  throw Error(ErrorCode::Config, "[" + section + "] " + key + ": " + what);
}

std::string trim(const std::string & s)
{
  const auto begin = s.find_first_not_of(" \t\r");
  if(begin == std::string::npos)
  {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parseDouble(const std::string & text, double & out)
{
  const std::string s = trim(text);
  const char * first = s.data();
  const char * last = s.data() + s.size();
  if(first != last && *first == '+')
  {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::string formatDouble(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

/// A key bound to one field: how to read it from text and how to print it.
struct Binding
{
  std::function<void(const std::string &)> read;
  std::function<std::string()> write;
};

using Section = std::vector<std::pair<std::string, Binding>>;

struct Binder
{
  std::string section;
  Section keys;

  void real(const std::string & key, double & field)
  {
    keys.emplace_back(key, Binding{[section = section, key, &field](const std::string & text) {
                                     if(!parseDouble(text, field))
                                     {
                                       fieldError(section, key, "expected a number, got '" + text + "'");
                                     }
                                   },
                                   [&field] { return formatDouble(field); }});
  }

  template<typename Int>
  void integer(const std::string & key, Int & field)
  {
    keys.emplace_back(key, Binding{[section = section, key, &field](const std::string & text) {
                                     const std::string s = trim(text);
                                     Int value{};
                                     const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
                                     if(ec != std::errc() || ptr != s.data() + s.size() || s.empty())
                                     {
                                       fieldError(section, key, "expected a non-negative integer, got '" + text + "'");
                                     }
                                     field = value;
                                   },
                                   [&field] { return std::to_string(field); }});
  }

  void vector(const std::string & key, Vector3 & field)
  {
    keys.emplace_back(key, Binding{[section = section, key, &field](const std::string & text) {
                                     std::string s = text;
                                     std::replace(s.begin(), s.end(), ',', ' ');
                                     std::istringstream is(s);
                                     std::string token;
                                     std::vector<double> values;
                                     while(is >> token)
                                     {
                                       double v = 0.0;
                                       if(!parseDouble(token, v))
                                       {
                                         fieldError(section, key, "expected three numbers, got '" + text + "'");
                                       }
                                       values.push_back(v);
                                     }
                                     if(values.size() != 3)
                                     {
                                       fieldError(section, key, "expected three numbers, got '" + text + "'");
                                     }
                                     field = Vector3(values[0], values[1], values[2]);
                                   },
                                   [&field] {
                                     return formatDouble(field.x()) + " " + formatDouble(field.y()) + " "
                                            + formatDouble(field.z());
                                   }});
  }

  void boolean(const std::string & key, bool & field)
  {
    keys.emplace_back(key, Binding{[section = section, key, &field](const std::string & text) {
                                     const std::string s = trim(text);
                                     if(s == "true" || s == "1" || s == "yes" || s == "on")
                                     {
                                       field = true;
                                     }
                                     else if(s == "false" || s == "0" || s == "no" || s == "off")
                                     {
                                       field = false;
                                     }
                                     else
                                     {
                                       fieldError(section, key, "expected true or false, got '" + text + "'");
                                     }
                                   },
                                   [&field] { return std::string(field ? "true" : "false"); }});
  }

  void text(const std::string & key, std::string & field)
  {
    keys.emplace_back(key, Binding{[&field](const std::string & t) { field = trim(t); }, [&field] { return field; }});
  }

  void anchor(const std::string & key, AnchorSource & field)
  {
    keys.emplace_back(key, Binding{[section = section, key, &field](const std::string & t) {
                                     try
                                     {
                                       field = anchorSourceFromString(trim(t));
                                     }
                                     catch(const Error & e)
                                     {
                                       fieldError(section, key, e.what());
                                     }
                                   },
                                   [&field] { return toString(field); }});
  }
};

/// Every fixed section of the format, bound to the fields of `c`.
std::vector<Binder> bindings(RunConfig & c)
{
  ScenarioConfig & s = c.scenario;
  std::vector<Binder> out;

  Binder run{"run", {}};
  run.text("name", s.name);
  run.real("duration", s.duration);
  run.real("dt_sim", s.dtSim);
  run.real("dt_control", s.dtControl);
  run.real("log_cadence_hz", s.logCadenceHz);
  run.real("initial_error_angle", s.initialErrorAngle);
  run.vector("initial_error_axis", s.initialErrorAxis);
  run.real("initial_yaw", s.initialYaw);
  run.text("output_dir", c.outputDir);
  out.push_back(std::move(run));

  Binder gains{"gains", {}};
  gains.real("alpha1", s.gains.alpha1);
  gains.real("alpha2", s.gains.alpha2);
  gains.real("gamma", s.gains.gamma);
  out.push_back(std::move(gains));

  Binder observer{"observer", {}};
  observer.real("g0", s.g0);
  out.push_back(std::move(observer));

  Binder body{"body", {}};
  body.real("mass", s.mass);
  body.vector("inertia", s.inertia);
  body.real("com_height", s.geometry.comHeight);
  body.real("top_height", s.geometry.bodyTop);
  out.push_back(std::move(body));

  Binder contact{"contact", {}};
  contact.real("stiffness", s.stiffness);
  contact.real("damping", s.damping);
  contact.real("tangential_stiffness", s.tangentialStiffness);
  contact.real("tangential_damping", s.tangentialDamping);
  contact.real("foot_half_length", s.geometry.footHalfLength);
  contact.real("foot_half_width", s.geometry.footHalfWidth);
  contact.real("foot_lateral_offset", s.geometry.footLateralOffset);
  contact.boolean("landing_points", s.geometry.landingPoints);
  out.push_back(std::move(contact));

  Binder imu{"imu", {}};
  imu.vector("position", s.imuPosition);
  imu.vector("rpy", s.imuRpy);
  out.push_back(std::move(imu));

  Binder motion{"offset_motion", {}};
  motion.real("amplitude", s.imuMotionAmplitude);
  motion.real("angle", s.imuMotionAngle);
  motion.real("frequency", s.imuMotionFrequency);
  out.push_back(std::move(motion));

  Binder noise{"noise", {}};
  noise.real("gyro_sd", s.gyroSd);
  noise.real("accel_sd", s.accelSd);
  noise.integer("seed", s.seed);
  out.push_back(std::move(noise));

  Binder anchor{"anchor", {}};
  anchor.anchor("source", s.anchorSource);
  anchor.real("velocity_cutoff_hz", s.anchorVelocityCutoffHz);
  out.push_back(std::move(anchor));

  Binder verify{"verify", {}};
  verify.boolean("lyapunov", c.verify.lyapunov);
  verify.boolean("eigen", c.verify.eigen);
  verify.boolean("sweep", c.verify.sweep);
  verify.integer("lyapunov_trajectories", c.lyapunov.trajectories);
  verify.integer("lyapunov_seed", c.lyapunov.seed);
  verify.real("lyapunov_horizon", c.lyapunov.horizon);
  verify.real("lyapunov_dt", c.lyapunov.dt);
  verify.real("lyapunov_ball_radius", c.lyapunov.ballRadius);
  out.push_back(std::move(verify));

  Binder sweep{"sweep", {}};
  sweep.integer("samples", c.sweep.samples);
  sweep.integer("seed", c.sweep.seed);
  sweep.real("horizon", c.sweep.horizon);
  sweep.real("dt", c.sweep.dt);
  sweep.real("tolerance", c.sweep.tolerance);
  sweep.real("ball_radius", c.sweep.ballRadius);
  sweep.real("cap_radius", c.sweep.capRadius);
  sweep.integer("threads", c.sweep.threads);
  out.push_back(std::move(sweep));

  return out;
}

Binder pushBinder(const std::string & section, PushConfig & p)
{
  Binder b{section, {}};
  b.real("t_start", p.tStart);
  b.real("duration", p.duration);
  b.vector("force", p.force);
  b.vector("point", p.point);
  return b;
}

/// Index N of a section named pushN, or 0.
unsigned pushIndex(const std::string & section)
{
  if(section.size() <= 4 || section.compare(0, 4, "push") != 0 || section == "pushes")
  {
    return 0;
  }
  unsigned n = 0;
  const auto [ptr, ec] = std::from_chars(section.data() + 4, section.data() + section.size(), n);
  return ec == std::errc() && ptr == section.data() + section.size() ? n : 0;
}

void applySection(Binder & binder, const pt::ptree & keys)
{
  for(const auto & [key, node] : keys)
  {
    if(!node.empty())
    {
      fieldError(binder.section, key, "nested keys are not supported");
    }
    const auto it = std::find_if(binder.keys.begin(), binder.keys.end(), [&](const auto & kv) { return kv.first == key; });
    if(it == binder.keys.end())
    {
      fieldError(binder.section, key, "unknown key");
    }
    it->second.read(node.data());
  }
}

} // namespace

std::vector<PushConfig> ScenarioConfig::standardPushes()
{
  std::vector<PushConfig> out;
  for(const PushEvent & e : Scenario::standardPushes())
  {
    out.push_back({e.tStart, e.duration, e.force, e.point});
  }
  return out;
}

Scenario ScenarioConfig::build() const
{
  Scenario s;
  s.name = name;
  s.duration = duration;
  s.dtSim = dtSim;
  s.dtControl = dtControl;
  s.logCadenceHz = logCadenceHz;
  s.initialErrorAngle = initialErrorAngle;
  s.initialErrorAxis = initialErrorAxis;
  s.initialYaw = initialYaw;
  s.gains = gains;
  s.g0 = g0;
  s.body.mass = mass;
  s.body.inertia = inertia;
  s.contact = ContactModel::biped(geometry.comHeight, geometry.footHalfLength, geometry.footHalfWidth,
                                  geometry.footLateralOffset, geometry.landingPoints, geometry.bodyTop);
  s.contact.stiffness = stiffness;
  s.contact.damping = damping;
  s.contact.tangentialStiffness = tangentialStiffness;
  s.contact.tangentialDamping = tangentialDamping;
  s.imu.position = imuPosition;
  s.imu.orientation = Rotation::aboutZ(imuRpy.z()) * Rotation::aboutY(imuRpy.y()) * Rotation::aboutX(imuRpy.x());
  s.imu.motionAmplitude = imuMotionAmplitude;
  s.imu.motionAngle = imuMotionAngle;
  s.imu.motionFrequency = imuMotionFrequency;
  s.noise = {gyroSd, accelSd, seed};
  s.anchorSource = anchorSource;
  s.anchorVelocityCutoffHz = anchorVelocityCutoffHz;
  s.pushes.clear();
  for(const PushConfig & p : pushes)
  {
    s.pushes.push_back({p.tStart, p.duration, p.force, p.point});
  }
  s.validate();
  return s;
}

SweepSettings SweepConfig::settings() const
{
  SweepSettings out;
  out.samples = samples;
  out.seed = seed;
  out.sampler.ballRadius = ballRadius;
  out.sampler.capRadius = capRadius;
  out.horizon = horizon;
  out.dt = dt;
  out.tolerance = tolerance;
  out.threads = threads;
  return out;
}

LyapunovSweepSettings LyapunovConfig::settings(unsigned threads) const
{
  LyapunovSweepSettings out;
  out.trajectories = trajectories;
  out.seed = seed;
  out.sampler.ballRadius = ballRadius;
  out.horizon = horizon;
  out.dt = dt;
  out.threads = threads;
  return out;
}

void RunConfig::validate() const
{
  try
  {
    scenario.build();
  }
  catch(const Error & e)
  {
    throw Error(ErrorCode::Config, std::string("invalid scenario: ") + e.what());
  }
  if(scenario.geometry.comHeight <= 0.0 || scenario.geometry.footHalfLength <= 0.0
     || scenario.geometry.footHalfWidth <= 0.0)
  {
    throw Error(ErrorCode::Config, "invalid scenario: foot dimensions and COM height must be positive");
  }
  if(sweep.samples == 0)
  {
    throw Error(ErrorCode::Config, "[sweep] samples must be positive");
  }
  if(!(sweep.horizon > 0.0) || !(sweep.dt > 0.0) || !(sweep.tolerance > 0.0) || !(sweep.ballRadius >= 0.0)
     || !(sweep.capRadius >= 0.0))
  {
    throw Error(ErrorCode::Config, "[sweep] horizon, dt and tolerance must be positive, radii non-negative");
  }
  if(lyapunov.trajectories == 0 || !(lyapunov.horizon > 0.0) || !(lyapunov.dt > 0.0) || !(lyapunov.ballRadius >= 0.0))
  {
    throw Error(ErrorCode::Config, "[verify] Lyapunov trajectories, horizon and dt must be positive");
  }
  if(outputDir.empty())
  {
    throw Error(ErrorCode::Config, "[run] output_dir must not be empty");
  }
}

void RunConfig::overrideSeed(std::uint64_t seed)
{
  scenario.seed = seed;
  sweep.seed = seed;
  lyapunov.seed = seed;
}

RunConfig parseConfig(const std::string & text, const std::string & origin)
{
  pt::ptree tree;
  std::istringstream is(text);
  try
  {
    pt::ini_parser::read_ini(is, tree);
  }
  catch(const pt::ini_parser_error & e)
  {
    throw Error(ErrorCode::Config, origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig config;
  std::vector<Binder> binders = bindings(config);
  bool standardPushes = true;
  Binder pushes{"pushes", {}};
  pushes.boolean("standard", standardPushes);
  std::map<unsigned, PushConfig> custom;

  for(const auto & [section, keys] : tree)
  {
    if(keys.empty() && !keys.data().empty())
    {
      throw Error(ErrorCode::Config, origin + ": key '" + section + "' outside of any section");
    }
    if(section == "pushes")
    {
      applySection(pushes, keys);
      continue;
    }
    if(const unsigned n = pushIndex(section))
    {
      PushConfig & p = custom[n];
      Binder b = pushBinder(section, p);
      applySection(b, keys);
      continue;
    }
    const auto it = std::find_if(binders.begin(), binders.end(), [&](const Binder & b) { return b.section == section; });
    if(it == binders.end())
    {
      throw Error(ErrorCode::Config, origin + ": unknown section [" + section + "]");
    }
    applySection(*it, keys);
  }

  if(!custom.empty())
  {
    config.scenario.pushes.clear();
    for(const auto & [n, p] : custom)
    {
      config.scenario.pushes.push_back(p);
    }
  }
  else if(!standardPushes)
  {
    config.scenario.pushes.clear();
  }
  config.validate();
  return config;
}

RunConfig loadConfig(const std::string & path)
{
  std::ifstream in(path);
  if(!in)
  {
    throw Error(ErrorCode::Config, "cannot open config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parseConfig(text.str(), path);
}

std::string serializeConfig(const RunConfig & config)
{
  RunConfig copy = config;
  std::ostringstream os;
  for(const Binder & b : bindings(copy))
  {
    os << '[' << b.section << "]\n";
    for(const auto & [key, binding] : b.keys)
    {
      os << key << " = " << binding.write() << '\n';
    }
    os << '\n';
  }
  os << "[pushes]\nstandard = false\n\n";
  for(std::size_t i = 0; i < copy.scenario.pushes.size(); ++i)
  {
    const Binder b = pushBinder("push" + std::to_string(i + 1), copy.scenario.pushes[i]);
    os << '[' << b.section << "]\n";
    for(const auto & [key, binding] : b.keys)
    {
      os << key << " = " << binding.write() << '\n';
    }
    os << '\n';
  }
  return os.str();
}

} // namespace tiltobs
