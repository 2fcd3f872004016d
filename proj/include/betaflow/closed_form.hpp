#pragma once

#include <cmath>
#include <string>

#include "betaflow/column.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"

namespace betaflow {

/// The zonal speed forced by bounded pressure variation in y:
/// beta*u + omega^2 = 0, with standard beta equal to -omega*radius/2.
inline double closed_form_u(const PhysicalConstants& c) {
  return -c.omega * c.omega / c.beta;
}

/// The steady constant solution (u, 0, 0) of the governing equations. The
/// output does not depend on the layer's declared vorticity; the layer only
/// supplies the nondegeneracy precondition.
inline FlowField make_closed_form_flow(const PhysicalConstants& c, const LayerSpec& layer) {
  require_nondegenerate(layer.vorticity, c);
  return constant_flow(closed_form_u(c), 0.0, 0.0);
}

/// Which sign convention to use for the vertical pressure coefficient:
/// `paper` is the printed closed form, `oracle` the value the steady
/// z-momentum balance produces. They disagree by sign for the closed-form
/// flow; the residual checks show which one the governing equations accept.
enum class SignConvention { paper, oracle };

inline const char* to_string(SignConvention s) {
  return s == SignConvention::paper ? "paper" : "oracle";
}

/// The z-coefficient of pressure per unit density, computed both ways.
struct VerticalCoefficient {
  double paper = 0.0;   ///< 2*omega^3/beta - omega^2*radius + gravity
  double oracle = 0.0;  ///< 2*omega*u + omega^2*radius - gravity

  double select(SignConvention s) const { return s == SignConvention::paper ? paper : oracle; }
};

/// Evaluates both conventions for a flow with zonal speed `flow_u` and
/// v = w = 0. With standard beta and the closed-form u these come out as
/// +gravity and -gravity.
inline VerticalCoefficient vertical_coefficient(const PhysicalConstants& c, double flow_u) {
  VerticalCoefficient k;
  k.paper = 2.0 * c.omega * c.omega * c.omega / c.beta - c.omega * c.omega * c.radius + c.gravity;
  k.oracle = 2.0 * c.omega * flow_u + c.omega * c.omega * c.radius - c.gravity;
  return k;
}

inline void require_positive_density(double density) {
  if (!(density > 0.0)) {
    throw ValidationError("density must be positive, got " + std::to_string(density));
  }
}

/// Pressure-unit form of the variable change:
/// P~ = P + rho*(-(omega^2/2) y^2 + (omega^2 radius - gravity) z).
inline PressureField tilde_transform(const PressureField& p, double density,
                                     const PhysicalConstants& c) {
  require_positive_density(density);
  const double y2 = -0.5 * density * c.omega * c.omega;
  const double z1 = density * (c.omega * c.omega * c.radius - c.gravity);
  return {[p, y2, z1](double x, double y, double z, double t) {
    return p(x, y, z, t) + y2 * y * y + z1 * z;
  }};
}

/// Exact inverse of tilde_transform; the round trip is the identity.
inline PressureField tilde_inverse(const PressureField& p, double density,
                                   const PhysicalConstants& c) {
  require_positive_density(density);
  const double y2 = 0.5 * density * c.omega * c.omega;
  const double z1 = -density * (c.omega * c.omega * c.radius - c.gravity);
  return {[p, y2, z1](double x, double y, double z, double t) {
    return p(x, y, z, t) + y2 * y * y + z1 * z;
  }};
}

/// The affine family is closed under the transform; shift the coefficients.
inline PressureAffine tilde_transform(const PressureAffine& p, double density,
                                      const PhysicalConstants& c) {
  require_positive_density(density);
  PressureAffine out = p;
  out.y2_coeff -= 0.5 * density * c.omega * c.omega;
  out.z_coeff += density * (c.omega * c.omega * c.radius - c.gravity);
  return out;
}

inline PressureAffine tilde_inverse(const PressureAffine& p, double density,
                                    const PhysicalConstants& c) {
  require_positive_density(density);
  PressureAffine out = p;
  out.y2_coeff += 0.5 * density * c.omega * c.omega;
  out.z_coeff -= density * (c.omega * c.omega * c.radius - c.gravity);
  return out;
}

/// The affine pressure closing the steady momentum balance for a constant
/// flow (u, 0, 0): the y^2 term cancels (beta*u + omega^2) y and the z term
/// comes from the vertical balance. For the closed-form u the y^2 term is zero
/// and the pressure depends on z only.
inline PressureAffine momentum_consistent_pressure(const PhysicalConstants& c, double density,
                                                   double u, double offset = 0.0) {
  require_positive_density(density);
  PressureAffine p;
  p.y2_coeff = -0.5 * density * (c.beta * u + c.omega * c.omega);
  p.z_coeff = density * (2.0 * c.omega * u + c.omega * c.omega * c.radius - c.gravity);
  p.offset = offset;
  return p;
}

}  // namespace betaflow
