#pragma once

namespace tiltobs::tolerance
{

/// Accepted deviation of a constructed unit vector / rotation from its manifold.
inline constexpr double kManifold = 1e-9;

/// Arithmetic agreement expected from closed-form identities.
inline constexpr double kArithmetic = 1e-12;

/// Below this norm a sphere step has no meaningful direction.
inline constexpr double kDegenerateNorm = 1e-9;

/// TRIAD refuses a tilt this close to the virtual magnetometer axis.
inline constexpr double kTriadCollinear = 1e-6;

} // namespace tiltobs::tolerance
