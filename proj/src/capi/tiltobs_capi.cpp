#include "tiltobs/tiltobs.h"

#include <cstring>
#include <new>
#include <string>

#include "anchor/anchor.hpp"
#include "common/error.hpp"
#include "harness/commands.hpp"
#include "observer/observer.hpp"

struct tiltobs_observer
{
  tiltobs::TiltObserver impl;
};

struct tiltobs_config
{
  tiltobs::RunConfig impl;
};

struct tiltobs_report
{
  bool passed = false;
  std::string json;
};

namespace
{

using tiltobs::ErrorCode;

thread_local std::string lastError;

tiltobs_status fail(tiltobs_status status, const std::string & message)
{
  lastError = message;
  return status;
}

tiltobs_status toStatus(ErrorCode code)
{
  switch(code)
  {
    case ErrorCode::InvalidArgument:
      return TILTOBS_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonFinite:
      return TILTOBS_ERR_NON_FINITE;
    case ErrorCode::Degenerate:
      return TILTOBS_ERR_DEGENERATE;
    case ErrorCode::TimeOrdering:
      return TILTOBS_ERR_TIME_ORDERING;
    case ErrorCode::NoSupport:
      return TILTOBS_ERR_NO_SUPPORT;
    case ErrorCode::Config:
      return TILTOBS_ERR_CONFIG;
    case ErrorCode::Diverged:
      return TILTOBS_ERR_DIVERGED;
    case ErrorCode::Io:
      return TILTOBS_ERR_IO;
  }
  return TILTOBS_ERR_INTERNAL;
}

/// Runs body, translating exceptions into status codes.
template<typename F>
tiltobs_status guarded(F && body)
{
  try
  {
    lastError.clear();
    body();
    return TILTOBS_OK;
  }
  catch(const tiltobs::Error & e)
  {
    return fail(toStatus(e.code()), e.what());
  }
  catch(const std::bad_alloc &)
  {
    return fail(TILTOBS_ERR_INTERNAL, "out of memory");
  }
  catch(const std::exception & e)
  {
    return fail(TILTOBS_ERR_INTERNAL, e.what());
  }
  catch(...)
  {
    return fail(TILTOBS_ERR_INTERNAL, "unknown error");
  }
}

void requirePointer(const void * p, const char * name)
{
  if(p == nullptr)
  {
    throw tiltobs::Error(ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
  }
}

tiltobs::Vector3 in(tiltobs_vec3 v)
{
  return {v.x, v.y, v.z};
}

tiltobs_vec3 out(const tiltobs::Vector3 & v)
{
  return {v.x(), v.y(), v.z()};
}

tiltobs::Matrix3 in(const tiltobs_mat3 & m)
{
  tiltobs::Matrix3 r;
  for(int i = 0; i < 3; ++i)
  {
    for(int j = 0; j < 3; ++j)
    {
      r(i, j) = m.m[3 * i + j];
    }
  }
  return r;
}

tiltobs_mat3 out(const tiltobs::Matrix3 & r)
{
  tiltobs_mat3 m;
  for(int i = 0; i < 3; ++i)
  {
    for(int j = 0; j < 3; ++j)
    {
      m.m[3 * i + j] = r(i, j);
    }
  }
  return m;
}

tiltobs::KinematicSample in(const tiltobs_kinematics & k)
{
  tiltobs::KinematicSample s;
  s.pCL = in(k.p_cl);
  s.rCL = tiltobs::Rotation::fromMatrix(in(k.r_cl));
  s.pdotCL = in(k.pdot_cl);
  s.omegaCL = in(k.omega_cl);
  return s;
}

using Command = tiltobs::CommandResult (*)(const tiltobs::RunConfig &, const std::string &);

tiltobs_status runCommand(Command command, const tiltobs_config * config, const char * outDir, tiltobs_report ** report)
{
  return guarded([&] {
    requirePointer(config, "config");
    requirePointer(report, "report");
    *report = nullptr;
    const std::string dir = outDir != nullptr ? std::string(outDir) : config->impl.outputDir;
    const tiltobs::CommandResult result = command(config->impl, dir);
    auto * r = new tiltobs_report;
    r->passed = result.passed;
    r->json = result.summary.dump(2);
    *report = r;
  });
}

} // namespace

extern "C" {

const char * tiltobs_version(void)
{
  return tiltobs::libraryVersion();
}

const char * tiltobs_last_error(void)
{
  return lastError.c_str();
}

const char * tiltobs_status_string(tiltobs_status status)
{
  switch(status)
  {
    case TILTOBS_OK:
      return "ok";
    case TILTOBS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case TILTOBS_ERR_NON_FINITE:
      return "non-finite value";
    case TILTOBS_ERR_DEGENERATE:
      return "degenerate geometry";
    case TILTOBS_ERR_TIME_ORDERING:
      return "time ordering";
    case TILTOBS_ERR_NO_SUPPORT:
      return "no support";
    case TILTOBS_ERR_CONFIG:
      return "configuration error";
    case TILTOBS_ERR_DIVERGED:
      return "simulation diverged";
    case TILTOBS_ERR_IO:
      return "i/o error";
    case TILTOBS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

tiltobs_status tiltobs_observer_create(const tiltobs_gains * gains,
                                       double g0,
                                       tiltobs_observer_mode mode,
                                       tiltobs_observer ** result)
{
  return guarded([&] {
    requirePointer(result, "out");
    *result = nullptr;
    tiltobs::Gains k;
    if(gains != nullptr)
    {
      k = {gains->alpha1, gains->alpha2, gains->gamma};
    }
    if(mode != TILTOBS_MODE_FULL && mode != TILTOBS_MODE_INTERMEDIATE)
    {
      throw tiltobs::Error(ErrorCode::InvalidArgument, "unknown observer mode");
    }
    const auto m = mode == TILTOBS_MODE_FULL ? tiltobs::TiltObserver::Mode::Full
                                             : tiltobs::TiltObserver::Mode::Intermediate;
    *result = new tiltobs_observer{tiltobs::TiltObserver(k, tiltobs::GravityConstant(g0), m)};
  });
}

void tiltobs_observer_destroy(tiltobs_observer * observer)
{
  delete observer;
}

tiltobs_status tiltobs_observer_reset(tiltobs_observer * observer, tiltobs_vec3 yv0, tiltobs_vec3 tiltGuess)
{
  return guarded([&] {
    requirePointer(observer, "observer");
    observer->impl.reset(in(yv0), tiltobs::UnitVector3::normalized(in(tiltGuess)));
  });
}

tiltobs_status tiltobs_observer_update(tiltobs_observer * observer,
                                       tiltobs_vec3 gyro,
                                       tiltobs_vec3 accel,
                                       tiltobs_vec3 yv,
                                       double dt)
{
  return guarded([&] {
    requirePointer(observer, "observer");
    tiltobs::ImuSample imu;
    imu.gyro = in(gyro);
    imu.accel = in(accel);
    observer->impl.update(imu, in(yv), dt);
  });
}

tiltobs_status tiltobs_observer_get_state(const tiltobs_observer * observer, tiltobs_state * result)
{
  return guarded([&] {
    requirePointer(observer, "observer");
    requirePointer(result, "out");
    const tiltobs::ObserverState & s = observer->impl.state();
    *result = {out(s.x1Hat), out(s.x2PrimeHat), out(s.x2Hat.vec())};
  });
}

tiltobs_status tiltobs_observer_get_tilt(const tiltobs_observer * observer, tiltobs_vec3 * result)
{
  return guarded([&] {
    requirePointer(observer, "observer");
    requirePointer(result, "out");
    *result = out(observer->impl.tiltEstimate().vec());
  });
}

tiltobs_status tiltobs_velocity_fixed_anchor(const tiltobs_kinematics * kin, tiltobs_vec3 gyro, tiltobs_vec3 * result)
{
  return guarded([&] {
    requirePointer(kin, "kin");
    requirePointer(result, "out");
    *result = out(tiltobs::velocityFixedAnchor(in(*kin), in(gyro)));
  });
}

tiltobs_status tiltobs_velocity_moving_anchor(const tiltobs_kinematics * kin,
                                              tiltobs_vec3 anchorVelocity,
                                              tiltobs_vec3 gyro,
                                              tiltobs_vec3 * result)
{
  return guarded([&] {
    requirePointer(kin, "kin");
    requirePointer(result, "out");
    tiltobs::AnchorState anchor;
    anchor.velocity = in(anchorVelocity);
    *result = out(tiltobs::velocityMovingAnchor(in(*kin), anchor, in(gyro)));
  });
}

tiltobs_status tiltobs_interpolate_anchor(tiltobs_vec3 leftPosition,
                                          double leftForce,
                                          tiltobs_vec3 rightPosition,
                                          double rightForce,
                                          tiltobs_vec3 * result)
{
  return guarded([&] {
    requirePointer(result, "out");
    *result = out(tiltobs::interpolateAnchor({in(leftPosition), leftForce}, {in(rightPosition), rightForce}));
  });
}

tiltobs_status tiltobs_triad_fuse(tiltobs_vec3 tilt, double yaw, tiltobs_mat3 * result)
{
  return guarded([&] {
    requirePointer(result, "out");
    *result = out(tiltobs::triadFuse(tiltobs::UnitVector3::normalized(in(tilt)), yaw).matrix());
  });
}

tiltobs_status tiltobs_config_default(tiltobs_config ** result)
{
  return guarded([&] {
    requirePointer(result, "out");
    *result = new tiltobs_config{};
  });
}

tiltobs_status tiltobs_config_load(const char * path, tiltobs_config ** result)
{
  return guarded([&] {
    requirePointer(path, "path");
    requirePointer(result, "out");
    *result = nullptr;
    *result = new tiltobs_config{tiltobs::loadConfig(path)};
  });
}

tiltobs_status tiltobs_config_parse(const char * text, tiltobs_config ** result)
{
  return guarded([&] {
    requirePointer(text, "text");
    requirePointer(result, "out");
    *result = nullptr;
    *result = new tiltobs_config{tiltobs::parseConfig(text)};
  });
}

void tiltobs_config_destroy(tiltobs_config * config)
{
  delete config;
}

tiltobs_status tiltobs_config_set_seed(tiltobs_config * config, uint64_t seed)
{
  return guarded([&] {
    requirePointer(config, "config");
    config->impl.overrideSeed(seed);
  });
}

tiltobs_status tiltobs_config_set_samples(tiltobs_config * config, size_t samples)
{
  return guarded([&] {
    requirePointer(config, "config");
    if(samples == 0)
    {
      throw tiltobs::Error(ErrorCode::Config, "sample count must be positive");
    }
    config->impl.sweep.samples = samples;
  });
}

tiltobs_status tiltobs_config_set_verify(tiltobs_config * config, unsigned mask)
{
  return guarded([&] {
    requirePointer(config, "config");
    if((mask & ~static_cast<unsigned>(TILTOBS_VERIFY_ALL)) != 0)
    {
      throw tiltobs::Error(ErrorCode::InvalidArgument, "unknown verification flag");
    }
    config->impl.verify.lyapunov = (mask & TILTOBS_VERIFY_LYAPUNOV) != 0;
    config->impl.verify.eigen = (mask & TILTOBS_VERIFY_EIGEN) != 0;
    config->impl.verify.sweep = (mask & TILTOBS_VERIFY_SWEEP) != 0;
  });
}

tiltobs_status tiltobs_config_get_verify(const tiltobs_config * config, unsigned * mask)
{
  return guarded([&] {
    requirePointer(config, "config");
    requirePointer(mask, "mask");
    const tiltobs::VerifyToggles & v = config->impl.verify;
    unsigned m = 0;
    m |= v.lyapunov ? static_cast<unsigned>(TILTOBS_VERIFY_LYAPUNOV) : 0u;
    m |= v.eigen ? static_cast<unsigned>(TILTOBS_VERIFY_EIGEN) : 0u;
    m |= v.sweep ? static_cast<unsigned>(TILTOBS_VERIFY_SWEEP) : 0u;
    *mask = m;
  });
}

tiltobs_status tiltobs_config_get_output_dir(const tiltobs_config * config, const char ** result)
{
  return guarded([&] {
    requirePointer(config, "config");
    requirePointer(result, "out");
    *result = config->impl.outputDir.c_str();
  });
}

tiltobs_status tiltobs_config_serialize(const tiltobs_config * config, char * buffer, size_t capacity, size_t * needed)
{
  return guarded([&] {
    requirePointer(config, "config");
    const std::string text = tiltobs::serializeConfig(config->impl);
    if(needed != nullptr)
    {
      *needed = text.size() + 1;
    }
    if(buffer == nullptr)
    {
      return;
    }
    if(capacity < text.size() + 1)
    {
      throw tiltobs::Error(ErrorCode::InvalidArgument, "buffer too small for the serialized config");
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

tiltobs_status tiltobs_run(const tiltobs_config * config, const char * outDir, tiltobs_report ** report)
{
  return runCommand(&tiltobs::runCommand, config, outDir, report);
}

tiltobs_status tiltobs_verify(const tiltobs_config * config, const char * outDir, tiltobs_report ** report)
{
  return runCommand(&tiltobs::verifyCommand, config, outDir, report);
}

tiltobs_status tiltobs_sweep(const tiltobs_config * config, const char * outDir, tiltobs_report ** report)
{
  return runCommand(&tiltobs::sweepCommand, config, outDir, report);
}

tiltobs_status tiltobs_compare(const tiltobs_config * config, const char * outDir, tiltobs_report ** report)
{
  return runCommand(&tiltobs::compareCommand, config, outDir, report);
}

int tiltobs_report_passed(const tiltobs_report * report)
{
  return report != nullptr && report->passed ? 1 : 0;
}

const char * tiltobs_report_json(const tiltobs_report * report)
{
  return report != nullptr ? report->json.c_str() : "";
}

void tiltobs_report_destroy(tiltobs_report * report)
{
  delete report;
}

} // extern "C"
