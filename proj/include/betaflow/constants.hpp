#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "betaflow/errors.hpp"

namespace betaflow {

/// Fixed geophysical parameters of the rotating beta-plane frame.
struct PhysicalConstants {
  double omega = 0.0;    ///< planetary angular speed [rad/s]
  double beta = 0.0;     ///< beta-plane parameter [1/(m s)]
  double radius = 0.0;   ///< planetary radius [m]
  double gravity = 0.0;  ///< gravitational acceleration [m/s^2]
  bool beta_derived = false;  ///< true when beta came from the 2*omega/radius default

  /// Conventional equatorial beta-plane value 2*omega/radius.
  double beta_standard() const { return 2.0 * omega / radius; }
};

/// Builds validated constants. An empty `beta` derives the standard
/// equatorial value 2*omega/radius and flags it as derived.
inline PhysicalConstants make_constants(double omega, std::optional<double> beta,
                                        double radius, double gravity) {
  auto require_positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ValidationError(std::string(name) + " must be positive and finite, got " +
                            std::to_string(value));
    }
  };
  require_positive(omega, "omega");
  require_positive(radius, "radius");
  require_positive(gravity, "gravity");
  if (beta) require_positive(*beta, "beta");

  PhysicalConstants c;
  c.omega = omega;
  c.radius = radius;
  c.gravity = gravity;
  c.beta = beta ? *beta : 2.0 * omega / radius;
  c.beta_derived = !beta.has_value();
  return c;
}

/// Earth defaults: sidereal rotation rate, mean equatorial radius, standard beta.
inline PhysicalConstants earth_constants() {
  return make_constants(7.29e-5, std::nullopt, 6.378e6, 9.81);
}

}  // namespace betaflow
