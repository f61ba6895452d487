#pragma once

#include <stdexcept>
#include <string>

namespace tiltobs
{

/// Failure categories shared by every module. The numeric values are the
/// status codes exported through the C API.
enum class ErrorCode
{
  InvalidArgument = 1,
  NonFinite = 2,
  Degenerate = 3,
  TimeOrdering = 4,
  NoSupport = 5,
  Config = 6,
  Diverged = 7,
  Io = 8,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept
  {
    return code_;
  }

private:
  ErrorCode code_;
};

} // namespace tiltobs
