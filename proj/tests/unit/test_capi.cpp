#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tiltobs/tiltobs.h"

namespace fs = std::filesystem;

namespace
{

tiltobs_vec3 v3(double x, double y, double z)
{
  return {x, y, z};
}

double norm(tiltobs_vec3 v)
{
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

struct Observer
{
  tiltobs_observer * h = nullptr;
  ~Observer()
  {
    tiltobs_observer_destroy(h);
  }
};

struct Config
{
  tiltobs_config * h = nullptr;
  ~Config()
  {
    tiltobs_config_destroy(h);
  }
};

struct Report
{
  tiltobs_report * h = nullptr;
  ~Report()
  {
    tiltobs_report_destroy(h);
  }
};

std::string scratch(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / ("tiltobs_capi_" + name);
  fs::remove_all(dir);
  return dir.string();
}

} // namespace

TEST(Version, NonEmpty)
{
  EXPECT_GT(std::strlen(tiltobs_version()), 0u);
}

TEST(Status, EveryCodeHasText)
{
  for(const tiltobs_status s : {TILTOBS_OK, TILTOBS_ERR_INVALID_ARGUMENT, TILTOBS_ERR_NON_FINITE, TILTOBS_ERR_DEGENERATE,
                                TILTOBS_ERR_TIME_ORDERING, TILTOBS_ERR_NO_SUPPORT, TILTOBS_ERR_CONFIG,
                                TILTOBS_ERR_DIVERGED, TILTOBS_ERR_IO, TILTOBS_ERR_INTERNAL})
  {
    EXPECT_STRNE(tiltobs_status_string(s), "unknown status") << s;
  }
  EXPECT_STREQ(tiltobs_status_string(TILTOBS_OK), "ok");
  EXPECT_STREQ(tiltobs_status_string(static_cast<tiltobs_status>(42)), "unknown status");
}

TEST(Observer, LevelAndStillStaysPut)
{
  Observer o;
  ASSERT_EQ(tiltobs_observer_create(nullptr, 9.81, TILTOBS_MODE_FULL, &o.h), TILTOBS_OK);
  ASSERT_EQ(tiltobs_observer_reset(o.h, v3(0, 0, 0), v3(0, 0, 1)), TILTOBS_OK);
  for(int i = 0; i < 1000; ++i)
  {
    ASSERT_EQ(tiltobs_observer_update(o.h, v3(0, 0, 0), v3(0, 0, 9.81), v3(0, 0, 0), 1e-3), TILTOBS_OK);
  }
  tiltobs_state st;
  ASSERT_EQ(tiltobs_observer_get_state(o.h, &st), TILTOBS_OK);
  EXPECT_NEAR(st.x2_hat.z, 1.0, 1e-12);
  EXPECT_NEAR(norm(st.x1_hat), 0.0, 1e-12);
  tiltobs_vec3 tilt;
  ASSERT_EQ(tiltobs_observer_get_tilt(o.h, &tilt), TILTOBS_OK);
  EXPECT_EQ(tilt.z, st.x2_hat.z);
}

TEST(Observer, ConvergesFromWrongGuessAndKeepsUnitNorm)
{
  Observer o;
  const tiltobs_gains k{100, 20, 3};
  ASSERT_EQ(tiltobs_observer_create(&k, 9.81, TILTOBS_MODE_FULL, &o.h), TILTOBS_OK);
  ASSERT_EQ(tiltobs_observer_reset(o.h, v3(0, 0, 0), v3(0, std::sin(0.2), std::cos(0.2))), TILTOBS_OK);
  tiltobs_state st{};
  for(int i = 0; i < 60000; ++i)
  {
    ASSERT_EQ(tiltobs_observer_update(o.h, v3(0, 0, 0), v3(0, 0, 9.81), v3(0, 0, 0), 1e-3), TILTOBS_OK);
    ASSERT_EQ(tiltobs_observer_get_state(o.h, &st), TILTOBS_OK);
    ASSERT_NEAR(norm(st.x2_hat), 1.0, 1e-12);
  }
  EXPECT_NEAR(st.x2_hat.z, 1.0, 1e-6);
}

TEST(Observer, ErrorsTranslatedToStatus)
{
  Observer o;
  const tiltobs_gains bad{100, 20, -1};
  EXPECT_EQ(tiltobs_observer_create(&bad, 9.81, TILTOBS_MODE_FULL, &o.h), TILTOBS_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(tiltobs_last_error()).find("gamma"), std::string::npos) << tiltobs_last_error();
  EXPECT_EQ(o.h, nullptr);

  ASSERT_EQ(tiltobs_observer_create(nullptr, 9.81, TILTOBS_MODE_INTERMEDIATE, &o.h), TILTOBS_OK);
  EXPECT_STREQ(tiltobs_last_error(), "");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(tiltobs_observer_update(o.h, v3(nan, 0, 0), v3(0, 0, 9.81), v3(0, 0, 0), 1e-3), TILTOBS_ERR_NON_FINITE);
  EXPECT_EQ(tiltobs_observer_update(o.h, v3(0, 0, 0), v3(0, 0, 9.81), v3(0, 0, 0), 0.0), TILTOBS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tiltobs_observer_update(nullptr, v3(0, 0, 0), v3(0, 0, 9.81), v3(0, 0, 0), 1e-3),
            TILTOBS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tiltobs_observer_get_state(o.h, nullptr), TILTOBS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tiltobs_observer_reset(o.h, v3(0, 0, 0), v3(0, 0, 0)), TILTOBS_ERR_DEGENERATE);
  tiltobs_observer_destroy(nullptr);
}

TEST(Velocity, FixedAndMovingAnchor)
{
  // IMU 1 m above a fixed anchor, control frame rotating at 1 rad/s about x
  tiltobs_kinematics kin{};
  kin.p_cl = v3(0, 0, 1);
  kin.r_cl = {{1, 0, 0, 0, 1, 0, 0, 0, 1}};
  tiltobs_vec3 out;
  ASSERT_EQ(tiltobs_velocity_fixed_anchor(&kin, v3(1, 0, 0), &out), TILTOBS_OK);
  EXPECT_NEAR(out.x, 0.0, 1e-15);
  EXPECT_NEAR(out.y, -1.0, 1e-15);
  EXPECT_NEAR(out.z, 0.0, 1e-15);
  tiltobs_vec3 moving;
  ASSERT_EQ(tiltobs_velocity_moving_anchor(&kin, v3(0.5, 0, 0), v3(1, 0, 0), &moving), TILTOBS_OK);
  EXPECT_NEAR(moving.x, 0.5, 1e-15);
  EXPECT_NEAR(moving.y, -1.0, 1e-15);
  kin.r_cl.m[0] = 2.0;
  EXPECT_NE(tiltobs_velocity_fixed_anchor(&kin, v3(1, 0, 0), &out), TILTOBS_OK);
}

TEST(Velocity, AnchorInterpolation)
{
  tiltobs_vec3 p;
  ASSERT_EQ(tiltobs_interpolate_anchor(v3(0, 0.1, 0), 300, v3(0, -0.1, 0), 100, &p), TILTOBS_OK);
  EXPECT_NEAR(p.y, 0.05, 1e-15);
  EXPECT_EQ(tiltobs_interpolate_anchor(v3(0, 0.1, 0), 0, v3(0, -0.1, 0), 0, &p), TILTOBS_ERR_NO_SUPPORT);
}

TEST(Triad, LevelWithYaw)
{
  tiltobs_mat3 r;
  ASSERT_EQ(tiltobs_triad_fuse(v3(0, 0, 1), 0.5, &r), TILTOBS_OK);
  EXPECT_NEAR(r.m[0], std::cos(0.5), 1e-12);
  EXPECT_NEAR(r.m[3], std::sin(0.5), 1e-12);
  EXPECT_NEAR(r.m[8], 1.0, 1e-12);
  EXPECT_NE(tiltobs_triad_fuse(v3(0, 0, 0), 0.5, &r), TILTOBS_OK);
}

TEST(Config, DefaultParseSerialize)
{
  Config a, b;
  ASSERT_EQ(tiltobs_config_default(&a.h), TILTOBS_OK);
  size_t needed = 0;
  ASSERT_EQ(tiltobs_config_serialize(a.h, nullptr, 0, &needed), TILTOBS_OK);
  ASSERT_GT(needed, 1u);
  std::vector<char> text(needed);
  EXPECT_EQ(tiltobs_config_serialize(a.h, text.data(), needed - 1, nullptr), TILTOBS_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(tiltobs_config_serialize(a.h, text.data(), text.size(), nullptr), TILTOBS_OK);
  EXPECT_NE(std::string(text.data()).find("gamma = 3"), std::string::npos);
  ASSERT_EQ(tiltobs_config_parse(text.data(), &b.h), TILTOBS_OK);
  std::vector<char> again(needed);
  ASSERT_EQ(tiltobs_config_serialize(b.h, again.data(), again.size(), nullptr), TILTOBS_OK);
  EXPECT_STREQ(again.data(), text.data());
}

TEST(Config, ErrorsAndSetters)
{
  Config c;
  EXPECT_EQ(tiltobs_config_parse("[gains]\ngamma = -1\n", &c.h), TILTOBS_ERR_CONFIG);
  EXPECT_NE(std::string(tiltobs_last_error()).find("gamma"), std::string::npos);
  EXPECT_EQ(tiltobs_config_load("/nonexistent/tiltobs.ini", &c.h), TILTOBS_ERR_CONFIG);
  EXPECT_EQ(c.h, nullptr);

  ASSERT_EQ(tiltobs_config_parse("[run]\noutput_dir = somewhere\n", &c.h), TILTOBS_OK);
  const char * dir = nullptr;
  ASSERT_EQ(tiltobs_config_get_output_dir(c.h, &dir), TILTOBS_OK);
  EXPECT_STREQ(dir, "somewhere");
  unsigned mask = 99;
  ASSERT_EQ(tiltobs_config_get_verify(c.h, &mask), TILTOBS_OK);
  EXPECT_EQ(mask, 0u);
  ASSERT_EQ(tiltobs_config_set_verify(c.h, TILTOBS_VERIFY_EIGEN | TILTOBS_VERIFY_SWEEP), TILTOBS_OK);
  ASSERT_EQ(tiltobs_config_get_verify(c.h, &mask), TILTOBS_OK);
  EXPECT_EQ(mask, unsigned(TILTOBS_VERIFY_EIGEN | TILTOBS_VERIFY_SWEEP));
  EXPECT_EQ(tiltobs_config_set_verify(c.h, 8u), TILTOBS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tiltobs_config_set_samples(c.h, 0), TILTOBS_ERR_CONFIG);
  ASSERT_EQ(tiltobs_config_set_seed(c.h, 321), TILTOBS_OK);

  size_t needed = 0;
  ASSERT_EQ(tiltobs_config_serialize(c.h, nullptr, 0, &needed), TILTOBS_OK);
  std::vector<char> text(needed);
  ASSERT_EQ(tiltobs_config_serialize(c.h, text.data(), text.size(), nullptr), TILTOBS_OK);
  const std::string s(text.data());
  EXPECT_NE(s.find("seed = 321"), std::string::npos);
  EXPECT_EQ(s.find("seed = 1\n"), std::string::npos);
}

TEST(Commands, RunReportAndDivergence)
{
  Config c;
  ASSERT_EQ(tiltobs_config_parse("[run]\nduration = 1\n[pushes]\nstandard = false\n", &c.h), TILTOBS_OK);
  Report r;
  const std::string dir = scratch("run");
  ASSERT_EQ(tiltobs_run(c.h, dir.c_str(), &r.h), TILTOBS_OK);
  EXPECT_EQ(tiltobs_report_passed(r.h), 1);
  const std::string json = tiltobs_report_json(r.h);
  EXPECT_NE(json.find("\"command\": \"run\""), std::string::npos) << json.substr(0, 200);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "trajectory.csv"));

  Config runaway;
  ASSERT_EQ(tiltobs_config_parse("[run]\nduration = 1\n[push1]\nt_start = 0.1\nforce = 1e6, 0, 0\n", &runaway.h),
            TILTOBS_OK);
  Report bad;
  EXPECT_EQ(tiltobs_run(runaway.h, scratch("runaway").c_str(), &bad.h), TILTOBS_ERR_DIVERGED);
  EXPECT_EQ(bad.h, nullptr);
  EXPECT_GT(std::strlen(tiltobs_last_error()), 0u);
}

TEST(Commands, VerifyAndFailedSweep)
{
  Config c;
  ASSERT_EQ(tiltobs_config_parse("[sweep]\nsamples = 4\nhorizon = 0.1\n", &c.h), TILTOBS_OK);
  ASSERT_EQ(tiltobs_config_set_verify(c.h, TILTOBS_VERIFY_EIGEN), TILTOBS_OK);
  Report v;
  ASSERT_EQ(tiltobs_verify(c.h, scratch("verify").c_str(), &v.h), TILTOBS_OK);
  EXPECT_EQ(tiltobs_report_passed(v.h), 1);
  Report s;
  ASSERT_EQ(tiltobs_sweep(c.h, scratch("sweep").c_str(), &s.h), TILTOBS_OK);
  EXPECT_EQ(tiltobs_report_passed(s.h), 0);
  EXPECT_EQ(tiltobs_run(nullptr, nullptr, &s.h), TILTOBS_ERR_INVALID_ARGUMENT);
}
