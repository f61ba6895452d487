#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "harness/commands.hpp"
#include "harness/compare.hpp"
#include "harness/config.hpp"
#include "harness/metrics.hpp"

using namespace tiltobs;
namespace fs = std::filesystem;

namespace
{

ErrorCode codeOf(const std::function<void()> & f)
{
  try
  {
    f();
  }
  catch(const Error & e)
  {
    return e.code();
  }
  return ErrorCode{};
}

std::string messageOf(const std::function<void()> & f)
{
  try
  {
    f();
  }
  catch(const Error & e)
  {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / ("tiltobs_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

Scenario noiseless(double duration)
{
  Scenario s;
  s.noise.gyroSd = 0.0;
  s.noise.accelSd = 0.0;
  s.duration = duration;
  s.pushes.clear();
  return s;
}

} // namespace

TEST(Config, EmptyGivesDefaults)
{
  const RunConfig c = parseConfig("");
  const ScenarioConfig & s = c.scenario;
  EXPECT_EQ(s.gains.alpha1, 100.0);
  EXPECT_EQ(s.gains.alpha2, 20.0);
  EXPECT_EQ(s.gains.gamma, 3.0);
  EXPECT_EQ(s.gyroSd, 0.02);
  EXPECT_EQ(s.accelSd, 0.5);
  EXPECT_EQ(s.mass, 42.6);
  EXPECT_EQ(s.stiffness, 1e5);
  EXPECT_EQ(s.damping, 1e3);
  EXPECT_EQ(s.initialErrorAngle, 0.2);
  EXPECT_EQ(s.initialErrorAxis, Vector3::UnitX());
  ASSERT_EQ(s.pushes.size(), 2u);
  EXPECT_EQ(s.pushes[0].tStart, 4.0);
  EXPECT_EQ(s.pushes[0].force.norm(), 100.0);
  EXPECT_EQ(s.pushes[0].duration, 0.1);
  EXPECT_EQ(s.pushes[1].tStart, 14.0);
  EXPECT_EQ(s.pushes[1].force.norm(), 300.0);
  EXPECT_EQ(s.pushes[1].duration, 0.1);
  EXPECT_FALSE(c.verify.any());
  EXPECT_EQ(c, RunConfig{});
}

TEST(Config, NonPositiveGammaRejectedByName)
{
  const auto parse = [] { parseConfig("[gains]\ngamma = -1\n"); };
  EXPECT_EQ(codeOf(parse), ErrorCode::Config);
  const std::string msg = messageOf(parse);
  EXPECT_NE(msg.find("gamma"), std::string::npos) << msg;
  EXPECT_NE(msg.find("positive"), std::string::npos) << msg;
  EXPECT_EQ(codeOf([] { parseConfig("[gains]\nalpha2 = 0\n"); }), ErrorCode::Config);
}

TEST(Config, UnknownKeysAndSectionsRejected)
{
  const std::string key = messageOf([] { parseConfig("[gains]\nbeta = 1\n"); });
  EXPECT_NE(key.find("beta"), std::string::npos) << key;
  EXPECT_NE(key.find("gains"), std::string::npos) << key;
  const std::string section = messageOf([] { parseConfig("[nonsense]\nx = 1\n"); });
  EXPECT_NE(section.find("nonsense"), std::string::npos) << section;
}

TEST(Config, MalformedValueNamesField)
{
  const std::string msg = messageOf([] { parseConfig("[noise]\ngyro_sd = fast\n"); });
  EXPECT_NE(msg.find("gyro_sd"), std::string::npos) << msg;
  EXPECT_EQ(codeOf([] { parseConfig("[run]\ninitial_error_axis = 1, 0\n"); }), ErrorCode::Config);
}

TEST(Config, SyntaxErrorCarriesLine)
{
  const std::string msg = messageOf([] { parseConfig("[run]\nduration = 3\n[broken\n", "x.ini"); });
  EXPECT_NE(msg.find("x.ini:3"), std::string::npos) << msg;
}

TEST(Config, InvariantsEnforced)
{
  EXPECT_EQ(codeOf([] { parseConfig("[run]\nlog_cadence_hz = 0\n"); }), ErrorCode::Config);
  EXPECT_EQ(codeOf([] { parseConfig("[verify]\nsweep = true\n[sweep]\nsamples = 0\n"); }), ErrorCode::Config);
  EXPECT_EQ(codeOf([] { parseConfig("[run]\ndt_control = 1.5e-5\n"); }), ErrorCode::Config);
}

TEST(Config, RoundTripOfDefaults)
{
  const RunConfig c;
  EXPECT_EQ(parseConfig(serializeConfig(c)), c);
}

TEST(Config, RoundTripOfEditedConfig)
{
  const RunConfig c = parseConfig("[gains]\nalpha1 = 50.5\ngamma = 0.1\n"
                                  "[noise]\nseed = 77\ngyro_sd = 0.1234567890123\n"
                                  "[anchor]\nsource = feet\n"
                                  "[push1]\nt_start = 1\nforce = 0, 20, 0\n"
                                  "[push2]\nt_start = 2.5\nforce = 5, 0, 0\npoint = 0, 0, 0.1\n"
                                  "[verify]\neigen = true\n");
  const RunConfig back = parseConfig(serializeConfig(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.scenario.pushes.size(), 2u);
  EXPECT_EQ(back.scenario.anchorSource, AnchorSource::Feet);
  EXPECT_EQ(serializeConfig(back), serializeConfig(c));
}

TEST(Config, PushSelection)
{
  EXPECT_TRUE(parseConfig("[pushes]\nstandard = false\n").scenario.pushes.empty());
  const RunConfig custom = parseConfig("[push1]\nt_start = 2\nforce = 0, 50, 0\n");
  ASSERT_EQ(custom.scenario.pushes.size(), 1u);
  EXPECT_EQ(custom.scenario.pushes[0].force, Vector3(0, 50, 0));
  EXPECT_EQ(custom.scenario.pushes[0].duration, 0.1);
}

TEST(Config, SeedOverrideReachesEveryGenerator)
{
  RunConfig c;
  c.overrideSeed(1234);
  EXPECT_EQ(c.scenario.seed, 1234u);
  EXPECT_EQ(c.sweep.seed, 1234u);
  EXPECT_EQ(c.lyapunov.seed, 1234u);
  EXPECT_EQ(c.scenario.build().noise.seed, 1234u);
}

TEST(Config, LoadFile)
{
  const fs::path dir = scratch("load");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "empty.ini");
    std::ofstream(dir / "short.ini") << "[run]\nduration = 2\n";
  }
  EXPECT_EQ(loadConfig((dir / "empty.ini").string()), RunConfig{});
  EXPECT_EQ(loadConfig((dir / "short.ini").string()).scenario.duration, 2.0);
  EXPECT_EQ(codeOf([&] { loadConfig((dir / "missing.ini").string()); }), ErrorCode::Config);
}

TEST(TrajectoryCsv, GoldenHeader)
{
  std::string joined;
  for(const std::string & c : TrajectoryLog::columns())
  {
    joined += (joined.empty() ? "" : ",") + c;
  }
  EXPECT_EQ(joined,
            "t,x2_true_x,x2_true_y,x2_true_z,y_g_x,y_g_y,y_g_z,y_a_x,y_a_y,y_a_z,y_v_x,y_v_y,y_v_z,"
            "x1hat_x,x1hat_y,x1hat_z,x2phat_x,x2phat_y,x2phat_z,x2hat_x,x2hat_y,x2hat_z,err_angle_rad,lyapunov_V");

  Scenario s = noiseless(0.05);
  std::ostringstream os;
  runScenario(s).writeCsv(os);
  std::istringstream is(os.str());
  std::string first, second, row;
  std::getline(is, first);
  std::getline(is, second);
  EXPECT_EQ(first.rfind("# tiltobs-log format=1 version=", 0), 0u) << first;
  for(const char * field : {" scenario=standard", " scenario_hash=", " gains=100,20,3", " seed=1"})
  {
    EXPECT_NE(first.find(field), std::string::npos) << field;
  }
  EXPECT_EQ(second, joined);
  std::size_t rows = 0;
  while(std::getline(is, row))
  {
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 23) << row;
    ++rows;
  }
  EXPECT_EQ(rows, 5u);
}

TEST(TrajectoryCsv, RowsAtCadenceAndTimeOrdered)
{
  Scenario s = noiseless(2.0);
  const TrajectoryLog log = runScenario(s);
  ASSERT_EQ(log.rows.size(), 200u);
  for(std::size_t i = 1; i < log.rows.size(); ++i)
  {
    EXPECT_NEAR(log.rows[i].t - log.rows[i - 1].t, 0.01, 1e-12);
  }
  EXPECT_EQ(log.ticks.t.size(), 2000u);
}

TEST(WindowStats, KnownValues)
{
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> x{9.0, 1.0, 2.0, 3.0, 9.0};
  const WindowStats w = windowStats(t, x, {1.0, 4.0});
  EXPECT_EQ(w.count, 3u);
  EXPECT_DOUBLE_EQ(w.mean, 2.0);
  EXPECT_DOUBLE_EQ(w.sd, std::sqrt(2.0 / 3.0));
  EXPECT_EQ(codeOf([&] { windowStats(t, x, {5.0, 6.0}); }), ErrorCode::InvalidArgument);
}

TEST(SettleTime, LastEntryBelowThreshold)
{
  const std::vector<double> t{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(settleTime(t, {1, 0.5, 0.005, 0.02, 0.001, 0.001}, 0.01, 5.0), 4.0);
  EXPECT_EQ(settleTime(t, {1, 0.5, 0.005, 0.02, 0.001, 0.5}, 0.01, 5.0), 4.0);
  EXPECT_EQ(settleTime(t, {0, 0, 0, 0, 0, 0}, 0.01, 5.0), 0.0);
  EXPECT_FALSE(settleTime(t, {1, 1, 1, 1, 1, 0.001}, 0.01, 5.0).has_value());
}

TEST(Metrics, FirstPushBumpAgainstNoPushReference)
{
  Scenario s;
  s.duration = 20.0;
  TrajectoryLog ref;
  for(int i = 0; i < 2000; ++i)
  {
    ref.ticks.t.push_back(i * 0.01);
    ref.ticks.errAngle.push_back(0.2 * std::exp(-0.2 * i * 0.01));
    ref.ticks.lyapunovV.push_back(0.0);
    ref.ticks.velocityError.push_back(0.0);
    ref.ticks.x2HatNormDeviation.push_back(0.0);
    ref.ticks.x2pHatNormDeviation.push_back(0.0);
    ref.ticks.inFlight.push_back(0);
  }
  TrajectoryLog run = ref;
  // decaying faster than the push rise: the onset-relative reading misses it
  for(int i = 450; i < 460; ++i)
  {
    run.ticks.errAngle[i] += 0.001;
  }
  run.ticks.errAngle[1450] += 0.5; // second push window, not counted
  EXPECT_EQ(*computeMetrics(run, s).firstPushBump, 0.0);
  EXPECT_NEAR(*computeMetrics(run, s, {}, &ref).firstPushBump, 0.001, 1e-15);
  EXPECT_EQ(*computeMetrics(ref, s, {}, &ref).firstPushBump, 0.0);
  EXPECT_NEAR(*computeMetrics(run, s, {}, &ref).fallMaxError, 0.5 + ref.ticks.errAngle[1450], 1e-15);

  TrajectoryLog shifted = ref;
  shifted.ticks.t[10] += 1e-3;
  EXPECT_EQ(codeOf([&] { computeMetrics(run, s, {}, &shifted); }), ErrorCode::InvalidArgument);
}

TEST(Metrics, NoiselessRunHasNoLyapunovIncreases)
{
  const Scenario s = noiseless(20.0);
  const ScenarioMetrics m = computeMetrics(runScenario(s), s);
  EXPECT_EQ(m.lyapunovIncreases, 0u);
  EXPECT_EQ(m.preEventEnd, 20.0);
  ASSERT_TRUE(m.measuredRate.has_value());
  EXPECT_NEAR(*m.measuredRate, 0.2004, 0.2 * 0.2004);
}

// Target: noiseless standard run settles below 0.01 rad in under 2 s. The
// slow tilt-error mode decays at 0.2004 /s, so it settles around 15 s.
TEST(Metrics, NoiselessStandardRunSettlesWithinTwoSeconds)
{
  const Scenario s = noiseless(20.0);
  const ScenarioMetrics m = computeMetrics(runScenario(s), s);
  ASSERT_TRUE(m.convergenceTime.has_value());
  EXPECT_LT(*m.convergenceTime, 2.0);
}

// Target: mean error over [2, 4] s of the noisy standard run below 0.05 rad.
// The 0.2 rad start decays at 0.2004 /s, so about 0.12 rad is left there.
TEST(Metrics, StandardRunWindowMeanBelow005)
{
  const Scenario s;
  const ScenarioMetrics m = computeMetrics(runScenario(s), s);
  EXPECT_LT(m.windowMeanError, 0.05);
}

TEST(Compare, NoiselessNormalityAndSharedStream)
{
  const Scenario s = noiseless(20.0);
  const ComparisonReport r = compareEstimators(s);
  EXPECT_TRUE(r.streamsIdentical());
  EXPECT_TRUE(r.normalityHeld());
  EXPECT_LE(r.maxX2HatNormDeviation, 1e-12);
  EXPECT_TRUE(r.intermediateDeviates());
  // both converge
  EXPECT_LT(r.fullError.back(), 0.05 * r.fullError.front());
  EXPECT_LT(r.intermediateError.back(), 0.05 * r.intermediateError.front());
}

TEST(Compare, SeedChangesStreamNotContract)
{
  Scenario s;
  s.duration = 3.0;
  const ComparisonReport a = compareEstimators(s);
  const ComparisonReport b = compareEstimators(s);
  s.noise.seed = 5;
  const ComparisonReport c = compareEstimators(s);
  EXPECT_TRUE(a.streamsIdentical());
  EXPECT_TRUE(c.streamsIdentical());
  EXPECT_EQ(a.fullStreamDigest, b.fullStreamDigest);
  EXPECT_NE(a.fullStreamDigest, c.fullStreamDigest);
  EXPECT_EQ(a.fullError, b.fullError);
}

TEST(Eigen, VerdictForReferenceGains)
{
  const EigenVerdict v = checkEigenstructure(Gains{}, GravityConstant(9.81));
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.a2RootsAtGamma, 2);
  EXPECT_NEAR(v.a3.slowestRealPart, -0.2004, 5e-5);
}

TEST(Commands, RunWritesArtifacts)
{
  RunConfig c = parseConfig("[run]\nduration = 5\n[pushes]\nstandard = false\n[push1]\nt_start = 4\nforce = 100, 0, 0\n");
  const fs::path dir = scratch("run");
  const CommandResult r = runCommand(c, dir.string());
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  const Json & m = r.summary.at("metrics");
  for(const char * key : {"convergence_time_s", "post_convergence_rms_rad", "measured_rate_per_s", "lyapunov_increases",
                          "first_push_bump_rad", "fall_max_error_rad"})
  {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_EQ(r.summary.at("rows"), 500);
  EXPECT_GT(m.at("first_push_bump_rad").get<double>(), 0.0);
  std::ifstream in(dir / "summary.json");
  EXPECT_EQ(Json::parse(in), r.summary);
}

TEST(Commands, VerifyEigenOnlyPasses)
{
  RunConfig c;
  c.verify.eigen = true;
  const fs::path dir = scratch("verify");
  const CommandResult r = verifyCommand(c, dir.string());
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.summary.at("verification").contains("eigen"));
  EXPECT_FALSE(r.summary.at("verification").contains("sweep"));
  EXPECT_TRUE(fs::exists(dir / "verify.json"));
}

TEST(Commands, ShortSweepFailsVerification)
{
  RunConfig c;
  c.sweep.samples = 4;
  c.sweep.horizon = 0.1;
  const CommandResult r = sweepCommand(c, scratch("sweep").string());
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.summary.at("passed").get<bool>());
}

TEST(Commands, InvalidConfigRejectedBeforeWork)
{
  RunConfig c;
  c.scenario.gains.gamma = 0.0;
  const fs::path dir = scratch("invalid");
  EXPECT_EQ(codeOf([&] { runCommand(c, dir.string()); }), ErrorCode::Config);
  EXPECT_FALSE(fs::exists(dir / "summary.json"));
}
