#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace betaflow {

/// Scalar function of space-time, evaluated as f(x, y, z, t).
using ScalarField = std::function<double(double, double, double, double)>;

/// Velocity components, each (x, y, z, t) -> m/s.
struct FlowField {
  ScalarField u, v, w;
};

/// Pressure as an evaluable field, (x, y, z, t) -> Pa.
struct PressureField {
  ScalarField value;

  double operator()(double x, double y, double z, double t) const {
    return value(x, y, z, t);
  }
};

/// Pressure of the form cx*x + cy2*y^2 + cz*z + c0. Every layer solution and
/// both vertical sign conventions live inside this family; with
/// x_coeff = y2_coeff = 0 the field depends on z only (plus the offset).
struct PressureAffine {
  double x_coeff = 0.0;   ///< Pa/m
  double y2_coeff = 0.0;  ///< Pa/m^2
  double z_coeff = 0.0;   ///< Pa/m
  double offset = 0.0;    ///< Pa

  double operator()(double x, double y, double z, double /*t*/) const {
    return x_coeff * x + y2_coeff * y * y + z_coeff * z + offset;
  }

  PressureField as_field() const {
    return {[p = *this](double x, double y, double z, double t) { return p(x, y, z, t); }};
  }
};

/// Constant vorticity vector; components follow the curl ordering
/// (w_y - v_z, u_z - w_x, v_x - u_y).
struct Vorticity {
  double lambda1 = 0.0;  ///< 1/s
  double lambda2 = 0.0;  ///< 1/s
  double lambda3 = 0.0;  ///< 1/s
};

/// A material surface z = eta(x, y, t), optionally carrying a declared bound
/// on |d eta / d y|.
struct SurfaceField {
  std::function<double(double, double, double)> eval;
  std::optional<double> y_slope_bound;

  double operator()(double x, double y, double t) const { return eval(x, y, t); }
};

inline FlowField constant_flow(double u, double v, double w) {
  return {[u](double, double, double, double) { return u; },
          [v](double, double, double, double) { return v; },
          [w](double, double, double, double) { return w; }};
}

inline SurfaceField constant_surface(double level) {
  return {[level](double, double, double) { return level; }, 0.0};
}

/// eta = c0 + cx*x + cy*y.
inline SurfaceField affine_surface(double c0, double cx, double cy) {
  return {[=](double x, double y, double) { return c0 + cx * x + cy * y; },
          std::abs(cy)};
}

/// eta = base + amplitude * sin(kx*x + ky*y + phase_rate*t).
inline SurfaceField sinusoidal_surface(double base, double amplitude, double kx,
                                       double ky, double phase_rate) {
  return {[=](double x, double y, double t) {
            return base + amplitude * std::sin(kx * x + ky * y + phase_rate * t);
          },
          std::abs(amplitude * ky)};
}

}  // namespace betaflow
