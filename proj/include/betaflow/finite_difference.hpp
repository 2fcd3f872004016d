#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "betaflow/fields.hpp"

namespace betaflow {

enum class Axis { x, y, z, t };

/// Central-difference step control. The step along an axis is
/// scale * max(rel_step * magnitude, min_step), where magnitude is the axis'
/// characteristic scale when one is set and |coordinate| otherwise. `scale`
/// is a global multiplier used by step-halving convergence studies.
struct FdOptions {
  double rel_step = 1e-4;
  double min_step = 1e-6;
  double scale = 1.0;
  std::optional<double> x_scale, y_scale, z_scale, t_scale;

  double step(Axis axis, double coord) const {
    const std::optional<double>* s = nullptr;
    switch (axis) {
      case Axis::x: s = &x_scale; break;
      case Axis::y: s = &y_scale; break;
      case Axis::z: s = &z_scale; break;
      case Axis::t: s = &t_scale; break;
    }
    const double magnitude = s->has_value() ? **s : std::abs(coord);
    return scale * std::max(rel_step * magnitude, min_step);
  }
};

/// d(field)/d(axis) at (x, y, z, t), second-order central differences.
inline double partial(const ScalarField& f, Axis axis, double x, double y, double z,
                      double t, const FdOptions& fd = {}) {
  switch (axis) {
    case Axis::x: {
      const double h = fd.step(axis, x);
      return (f(x + h, y, z, t) - f(x - h, y, z, t)) / (2.0 * h);
    }
    case Axis::y: {
      const double h = fd.step(axis, y);
      return (f(x, y + h, z, t) - f(x, y - h, z, t)) / (2.0 * h);
    }
    case Axis::z: {
      const double h = fd.step(axis, z);
      return (f(x, y, z + h, t) - f(x, y, z - h, t)) / (2.0 * h);
    }
    case Axis::t: {
      const double h = fd.step(axis, t);
      return (f(x, y, z, t + h) - f(x, y, z, t - h)) / (2.0 * h);
    }
  }
  return 0.0;  // unreachable
}

inline double fd_divergence(const FlowField& f, double x, double y, double z, double t,
                            const FdOptions& fd = {}) {
  return partial(f.u, Axis::x, x, y, z, t, fd) + partial(f.v, Axis::y, x, y, z, t, fd) +
         partial(f.w, Axis::z, x, y, z, t, fd);
}

/// Curl components in the order (w_y - v_z, u_z - w_x, v_x - u_y).
inline Vorticity fd_curl(const FlowField& f, double x, double y, double z, double t,
                         const FdOptions& fd = {}) {
  return {partial(f.w, Axis::y, x, y, z, t, fd) - partial(f.v, Axis::z, x, y, z, t, fd),
          partial(f.u, Axis::z, x, y, z, t, fd) - partial(f.w, Axis::x, x, y, z, t, fd),
          partial(f.v, Axis::x, x, y, z, t, fd) - partial(f.u, Axis::y, x, y, z, t, fd)};
}

/// d(eta)/dy by central differences; surfaces vary on large scales, so the
/// default step is 1 m.
inline double surface_y_slope(const SurfaceField& s, double x, double y, double t,
                              double h = 1.0) {
  return (s(x, y + h, t) - s(x, y - h, t)) / (2.0 * h);
}

}  // namespace betaflow
