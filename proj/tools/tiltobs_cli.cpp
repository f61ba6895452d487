// tiltobs: command-line front end over the C API.
//
//   tiltobs run     [--config PATH] [--out DIR] [--seed N] [--verify WHAT]... [--quiet]
//   tiltobs verify  [--config PATH] [--out DIR] [--verify WHAT]...
//   tiltobs sweep   [--config PATH] [--out DIR] [--seed N] [--samples N]
//   tiltobs compare [--config PATH] [--out DIR] [--seed N]
//
// Exit status: 0 success, 1 verification failure, 2 configuration error,
// 3 simulation divergence.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tiltobs/tiltobs.h"

namespace
{

enum ExitCode
{
  kSuccess = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kDiverged = 3
};

int exitCodeFor(tiltobs_status status)
{
  return status == TILTOBS_ERR_DIVERGED ? kDiverged : kConfigError;
}

std::string jsonEscape(const std::string & s)
{
  std::string out;
  for(const char c : s)
  {
    switch(c)
    {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        if(static_cast<unsigned char>(c) < 0x20)
        {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        }
        else
        {
          out += c;
        }
    }
  }
  return out;
}

// The machine-readable line printed when a command could not complete.
void printFailure(const std::string & command, tiltobs_status status, int exitCode)
{
  std::cout << "{\"command\": \"" << command << "\", \"passed\": false, \"exit_code\": " << exitCode
            << ", \"error\": {\"status\": \"" << tiltobs_status_string(status) << "\", \"message\": \""
            << jsonEscape(tiltobs_last_error()) << "\"}}" << std::endl;
  std::cerr << "tiltobs " << command << ": " << tiltobs_last_error() << std::endl;
}

unsigned verifyMask(const std::vector<std::string> & names)
{
  unsigned mask = 0;
  for(const std::string & n : names)
  {
    if(n == "lyapunov")
    {
      mask |= TILTOBS_VERIFY_LYAPUNOV;
    }
    else if(n == "eigen")
    {
      mask |= TILTOBS_VERIFY_EIGEN;
    }
    else if(n == "sweep")
    {
      mask |= TILTOBS_VERIFY_SWEEP;
    }
    else if(n == "all")
    {
      mask |= TILTOBS_VERIFY_ALL;
    }
  }
  return mask;
}

struct Options
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> verify;
  std::optional<std::size_t> samples;
  bool quiet = false;
};

} // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Tilt observer simulation and verification harness"};
  app.set_version_flag("--version", std::string(tiltobs_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config, "INI configuration file (defaults apply when omitted)");
  app.add_option("--out", opt.out, "Output directory (overrides [run] output_dir)");
  app.add_option("--seed", opt.seed, "Seed for the noise and the sampled checks");
  app.add_option("--verify", opt.verify, "Checks to run: lyapunov, eigen, sweep, all")
      ->check(CLI::IsMember({"lyapunov", "eigen", "sweep", "all"}))
      ->delimiter(',');
  app.add_option("--samples", opt.samples, "Initial conditions in the convergence sweep")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "No progress messages on stderr");

  CLI::App * run = app.add_subcommand("run", "Simulate the scenario with the observer in the loop");
  CLI::App * verify = app.add_subcommand("verify", "Eigenstructure, Lyapunov and convergence checks");
  CLI::App * sweep = app.add_subcommand("sweep", "Sampled convergence of the error dynamics");
  CLI::App * compare = app.add_subcommand("compare", "Full observer against the intermediate estimator");

  try
  {
    app.parse(argc, argv);
  }
  catch(const CLI::ParseError & e)
  {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  std::string command = "run";
  for(const CLI::App * sub : {run, verify, sweep, compare})
  {
    if(sub->parsed())
    {
      command = sub->get_name();
    }
  }

  tiltobs_config * config = nullptr;
  tiltobs_status status =
      opt.config.empty() ? tiltobs_config_default(&config) : tiltobs_config_load(opt.config.c_str(), &config);
  if(status == TILTOBS_OK && opt.seed)
  {
    status = tiltobs_config_set_seed(config, *opt.seed);
  }
  if(status == TILTOBS_OK && opt.samples)
  {
    status = tiltobs_config_set_samples(config, *opt.samples);
  }
  if(status == TILTOBS_OK && !opt.verify.empty())
  {
    unsigned mask = 0;
    status = tiltobs_config_get_verify(config, &mask);
    if(status == TILTOBS_OK)
    {
      status = tiltobs_config_set_verify(config, mask | verifyMask(opt.verify));
    }
  }
  if(status != TILTOBS_OK)
  {
    printFailure(command, status, kConfigError);
    tiltobs_config_destroy(config);
    return kConfigError;
  }

  const char * outDir = opt.out.empty() ? nullptr : opt.out.c_str();
  if(!opt.quiet)
  {
    const char * dir = outDir;
    if(dir == nullptr)
    {
      tiltobs_config_get_output_dir(config, &dir);
    }
    std::cerr << "tiltobs " << tiltobs_version() << ": " << command << " -> " << dir << std::endl;
  }

  tiltobs_report * report = nullptr;
  if(command == "run")
  {
    status = tiltobs_run(config, outDir, &report);
  }
  else if(command == "verify")
  {
    status = tiltobs_verify(config, outDir, &report);
  }
  else if(command == "sweep")
  {
    status = tiltobs_sweep(config, outDir, &report);
  }
  else
  {
    status = tiltobs_compare(config, outDir, &report);
  }
  tiltobs_config_destroy(config);

  if(status != TILTOBS_OK)
  {
    const int code = exitCodeFor(status);
    printFailure(command, status, code);
    return code;
  }
  std::cout << tiltobs_report_json(report) << std::endl;
  const bool passed = tiltobs_report_passed(report) != 0;
  tiltobs_report_destroy(report);
  if(!opt.quiet)
  {
    std::cerr << "tiltobs " << command << ": " << (passed ? "passed" : "verification failed") << std::endl;
  }
  return passed ? kSuccess : kVerificationFailed;
}
