/* Tilt observer library: C interface.
 *
 * All functions return a tiltobs_status. On failure a description of the
 * last error on the calling thread is available from tiltobs_last_error().
 * Objects are opaque handles owned by the caller and released with the
 * matching _destroy function. Vectors are plain structs of three doubles,
 * matrices are row-major 3x3 arrays.
 */
#ifndef TILTOBS_TILTOBS_H
#define TILTOBS_TILTOBS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TILTOBS_BUILDING)
#    define TILTOBS_API __declspec(dllexport)
#  else
#    define TILTOBS_API __declspec(dllimport)
#  endif
#else
#  define TILTOBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tiltobs_status
{
  TILTOBS_OK = 0,
  TILTOBS_ERR_INVALID_ARGUMENT = 1,
  TILTOBS_ERR_NON_FINITE = 2,
  TILTOBS_ERR_DEGENERATE = 3,
  TILTOBS_ERR_TIME_ORDERING = 4,
  TILTOBS_ERR_NO_SUPPORT = 5,
  TILTOBS_ERR_CONFIG = 6,
  TILTOBS_ERR_DIVERGED = 7,
  TILTOBS_ERR_IO = 8,
  TILTOBS_ERR_INTERNAL = 99
} tiltobs_status;

typedef struct tiltobs_vec3
{
  double x, y, z;
} tiltobs_vec3;

typedef struct tiltobs_mat3
{
  double m[9];
} tiltobs_mat3;

typedef struct tiltobs_gains
{
  double alpha1; /* velocity innovation gain [1/s] */
  double alpha2; /* intermediate tilt gain [1/s^2] */
  double gamma;  /* sphere correction gain [1/s] */
} tiltobs_gains;

typedef struct tiltobs_state
{
  tiltobs_vec3 x1_hat;  /* sensor velocity, sensor frame */
  tiltobs_vec3 x2p_hat; /* intermediate tilt, free norm */
  tiltobs_vec3 x2_hat;  /* tilt estimate, unit norm */
} tiltobs_state;

/* Encoder-side pose of the IMU in the control frame, origin on the anchor. */
typedef struct tiltobs_kinematics
{
  tiltobs_vec3 p_cl;     /* position [m] */
  tiltobs_mat3 r_cl;     /* orientation, row-major */
  tiltobs_vec3 pdot_cl;  /* linear velocity [m/s] */
  tiltobs_vec3 omega_cl; /* angular velocity, local frame [rad/s] */
} tiltobs_kinematics;

typedef enum tiltobs_observer_mode
{
  TILTOBS_MODE_FULL = 0,
  TILTOBS_MODE_INTERMEDIATE = 1
} tiltobs_observer_mode;

enum
{
  TILTOBS_VERIFY_LYAPUNOV = 1u,
  TILTOBS_VERIFY_EIGEN = 2u,
  TILTOBS_VERIFY_SWEEP = 4u,
  TILTOBS_VERIFY_ALL = 7u
};

typedef struct tiltobs_observer tiltobs_observer;
typedef struct tiltobs_config tiltobs_config;
typedef struct tiltobs_report tiltobs_report;

TILTOBS_API const char * tiltobs_version(void);

/* Message of the last failed call on this thread, "" if none. */
TILTOBS_API const char * tiltobs_last_error(void);

TILTOBS_API const char * tiltobs_status_string(tiltobs_status status);

/* Observer. gains may be NULL for the defaults (100, 20, 3). */
TILTOBS_API tiltobs_status tiltobs_observer_create(const tiltobs_gains * gains,
                                                   double g0,
                                                   tiltobs_observer_mode mode,
                                                   tiltobs_observer ** out);
TILTOBS_API void tiltobs_observer_destroy(tiltobs_observer * observer);
TILTOBS_API tiltobs_status tiltobs_observer_reset(tiltobs_observer * observer,
                                                  tiltobs_vec3 yv0,
                                                  tiltobs_vec3 tilt_guess);
TILTOBS_API tiltobs_status tiltobs_observer_update(tiltobs_observer * observer,
                                                   tiltobs_vec3 gyro,
                                                   tiltobs_vec3 accel,
                                                   tiltobs_vec3 yv,
                                                   double dt);
TILTOBS_API tiltobs_status tiltobs_observer_get_state(const tiltobs_observer * observer, tiltobs_state * out);
TILTOBS_API tiltobs_status tiltobs_observer_get_tilt(const tiltobs_observer * observer, tiltobs_vec3 * out);

/* Velocity aiding signal. */
TILTOBS_API tiltobs_status tiltobs_velocity_fixed_anchor(const tiltobs_kinematics * kin,
                                                         tiltobs_vec3 gyro,
                                                         tiltobs_vec3 * out);
TILTOBS_API tiltobs_status tiltobs_velocity_moving_anchor(const tiltobs_kinematics * kin,
                                                          tiltobs_vec3 anchor_velocity,
                                                          tiltobs_vec3 gyro,
                                                          tiltobs_vec3 * out);
TILTOBS_API tiltobs_status tiltobs_interpolate_anchor(tiltobs_vec3 left_position,
                                                      double left_force,
                                                      tiltobs_vec3 right_position,
                                                      double right_force,
                                                      tiltobs_vec3 * out);

/* Attitude from a tilt estimate and a reference yaw. */
TILTOBS_API tiltobs_status tiltobs_triad_fuse(tiltobs_vec3 tilt, double yaw, tiltobs_mat3 * out);

/* Run configuration. */
TILTOBS_API tiltobs_status tiltobs_config_default(tiltobs_config ** out);
TILTOBS_API tiltobs_status tiltobs_config_load(const char * path, tiltobs_config ** out);
TILTOBS_API tiltobs_status tiltobs_config_parse(const char * text, tiltobs_config ** out);
TILTOBS_API void tiltobs_config_destroy(tiltobs_config * config);
TILTOBS_API tiltobs_status tiltobs_config_set_seed(tiltobs_config * config, uint64_t seed);
TILTOBS_API tiltobs_status tiltobs_config_set_samples(tiltobs_config * config, size_t samples);
TILTOBS_API tiltobs_status tiltobs_config_set_verify(tiltobs_config * config, unsigned mask);
TILTOBS_API tiltobs_status tiltobs_config_get_verify(const tiltobs_config * config, unsigned * mask);
TILTOBS_API tiltobs_status tiltobs_config_get_output_dir(const tiltobs_config * config, const char ** out);
/* Writes the INI form. *needed receives the size including the terminator;
 * buffer may be NULL to query it. */
TILTOBS_API tiltobs_status tiltobs_config_serialize(const tiltobs_config * config,
                                                    char * buffer,
                                                    size_t capacity,
                                                    size_t * needed);

/* Commands. out_dir NULL uses the configured output directory. A report is
 * returned whenever the command ran to completion, passed or not. */
TILTOBS_API tiltobs_status tiltobs_run(const tiltobs_config * config, const char * out_dir, tiltobs_report ** out);
TILTOBS_API tiltobs_status tiltobs_verify(const tiltobs_config * config, const char * out_dir, tiltobs_report ** out);
TILTOBS_API tiltobs_status tiltobs_sweep(const tiltobs_config * config, const char * out_dir, tiltobs_report ** out);
TILTOBS_API tiltobs_status tiltobs_compare(const tiltobs_config * config, const char * out_dir, tiltobs_report ** out);

TILTOBS_API int tiltobs_report_passed(const tiltobs_report * report);
/* JSON summary, valid until the report is destroyed. */
TILTOBS_API const char * tiltobs_report_json(const tiltobs_report * report);
TILTOBS_API void tiltobs_report_destroy(tiltobs_report * report);

#ifdef __cplusplus
}
#endif

#endif
