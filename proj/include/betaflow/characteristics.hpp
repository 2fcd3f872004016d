#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "betaflow/column.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"

namespace betaflow {

/// Values of the two combinations conserved along characteristic curves:
/// m = (lambda2 + 2*omega) x - lambda1 y,
/// n = lambda3 y + (beta/2) y^2 - (lambda2 + 2*omega) z.
struct CharacteristicInvariants {
  double m = 0.0;
  double n = 0.0;
};

inline CharacteristicInvariants invariants_at(const std::array<double, 3>& point,
                                              const Vorticity& vort,
                                              const PhysicalConstants& c) {
  require_nondegenerate(vort, c);
  const double slope = characteristic_slope(vort, c);
  const double x = point[0], y = point[1], z = point[2];
  return {slope * x - vort.lambda1 * y,
          vort.lambda3 * y + 0.5 * c.beta * y * y - slope * z};
}

struct CurvePoint {
  double s = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Samples of one integrated characteristic curve, parameter monotone in the
/// integration direction.
struct CharacteristicCurve {
  std::vector<CurvePoint> points;

  const CurvePoint& front() const { return points.front(); }
  const CurvePoint& back() const { return points.back(); }
};

/// Fixed-step classical fourth-order integration; the right-hand side is
/// polynomial in s, so no adaptivity is needed.
struct StepControl {
  int steps = 64;
};

/// Integrates dx/ds = lambda1, dy/ds = lambda2 + 2*omega, dz/ds = lambda3 + beta*y.
/// y is linear in s, so the quadrature inside the scheme lands on the
/// closed-form solution (x, y linear; z quadratic) up to rounding.
inline CharacteristicCurve integrate_characteristic(const std::array<double, 3>& start,
                                                    const Vorticity& vort,
                                                    const PhysicalConstants& c,
                                                    std::pair<double, double> s_span,
                                                    StepControl control = {}) {
  require_nondegenerate(vort, c);
  if (!std::isfinite(s_span.first) || !std::isfinite(s_span.second)) {
    throw ValidationError("characteristic s_span must be finite");
  }
  if (control.steps < 1) throw ValidationError("step control needs at least one step");

  CharacteristicCurve curve;
  curve.points.push_back({s_span.first, start[0], start[1], start[2]});
  if (s_span.first == s_span.second) return curve;

  const double slope = characteristic_slope(vort, c);
  const double ds = (s_span.second - s_span.first) / control.steps;
  double x = start[0], y = start[1], z = start[2];

  auto dz = [&](double yy) { return vort.lambda3 + c.beta * yy; };

  for (int step = 0; step < control.steps; ++step) {
    const double s = s_span.first + step * ds;
    // x and y have constant derivatives; only z needs the staged quadrature.
    const double k1 = dz(y);
    const double k2 = dz(y + 0.5 * ds * slope);
    const double k3 = k2;
    const double k4 = dz(y + ds * slope);
    x += ds * vort.lambda1;
    y += ds * slope;
    z += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw IntegrationError("characteristic integration lost finiteness after s = " +
                             std::to_string(s) + "; last good state (" +
                             std::to_string(curve.back().x) + ", " +
                             std::to_string(curve.back().y) + ", " +
                             std::to_string(curve.back().z) + ")");
    }
    curve.points.push_back({s + ds, x, y, z});
  }
  return curve;
}

/// General solution components that may depend only on (m, n, t); houses the
/// reduced solution's constants when U, V, W ignore their arguments.
struct GeneralSolutionFamily {
  std::function<double(double m, double n, double t)> U, V, W;

  static GeneralSolutionFamily constants(double u, double v, double w) {
    return {[u](double, double, double) { return u; },
            [v](double, double, double) { return v; },
            [w](double, double, double) { return w; }};
  }
};

/// Rebuilds the full flow from a family:
/// (u, v, w)(x, y, z, t) = (U, V, W + beta*y/(lambda2 + 2*omega) * V) at (m, n, t).
inline FlowField reconstruct_flow(const GeneralSolutionFamily& family, const Vorticity& vort,
                                  const PhysicalConstants& c) {
  require_nondegenerate(vort, c);
  const double slope = characteristic_slope(vort, c);
  auto mn = [vort, c](double x, double y, double z) {
    return invariants_at({x, y, z}, vort, c);
  };
  FlowField flow;
  flow.u = [family, mn](double x, double y, double z, double t) {
    const auto inv = mn(x, y, z);
    return family.U(inv.m, inv.n, t);
  };
  flow.v = [family, mn](double x, double y, double z, double t) {
    const auto inv = mn(x, y, z);
    return family.V(inv.m, inv.n, t);
  };
  flow.w = [family, mn, slope, beta = c.beta](double x, double y, double z, double t) {
    const auto inv = mn(x, y, z);
    return family.W(inv.m, inv.n, t) + beta * y / slope * family.V(inv.m, inv.n, t);
  };
  return flow;
}

/// Seeding and resolution for the characteristic-form check: curves start on a
/// coarse lattice across the queried box and are walked at fixed time slices.
struct CurveSampleSpec {
  std::array<double, 2> x_range{-1e5, 1e5};
  std::array<double, 2> y_range{-1e5, 1e5};
  std::array<double, 2> z_range{-100.0, 0.0};
  int curve_count = 16;
  int steps = 64;
  double s_span = 1.0;
  std::array<double, 3> t_slices{0.0, 1800.0, 3600.0};
};

/// Seed positions: a near-cubic lattice with curve_count points, deterministic.
inline std::vector<std::array<double, 3>> curve_seed_lattice(const CurveSampleSpec& spec) {
  const int count = spec.curve_count;
  int nx = std::max(1, static_cast<int>(std::lround(std::cbrt(static_cast<double>(count)))));
  int ny = std::max(1, static_cast<int>(std::lround(
                           std::sqrt(static_cast<double>(count) / nx))));
  int nz = (count + nx * ny - 1) / (nx * ny);
  auto coord = [](const std::array<double, 2>& range, int i, int n) {
    if (n == 1) return 0.5 * (range[0] + range[1]);
    return range[0] + (range[1] - range[0]) * (static_cast<double>(i) / (n - 1));
  };
  std::vector<std::array<double, 3>> seeds;
  seeds.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < nx && static_cast<int>(seeds.size()) < count; ++i)
    for (int j = 0; j < ny && static_cast<int>(seeds.size()) < count; ++j)
      for (int k = 0; k < nz && static_cast<int>(seeds.size()) < count; ++k)
        seeds.push_back({coord(spec.x_range, i, nx), coord(spec.y_range, j, ny),
                         coord(spec.z_range, k, nz)});
  return seeds;
}

struct CharacteristicFormReport {
  double max_u_deviation = 0.0;
  double max_v_deviation = 0.0;
  double max_w_deviation = 0.0;  ///< of the corrected invariant w - beta*y/(lambda2+2*omega) v
  double max_drift_m = 0.0;      ///< relative, |m - m0| / (1 + |m0|)
  double max_drift_n = 0.0;
  int curves = 0;

  double max_deviation() const {
    return std::max(max_u_deviation, std::max(max_v_deviation, max_w_deviation));
  }
};

/// Walks integrated curves at fixed t and reports how far u, v and the
/// corrected vertical component stray from their values at the curve start.
/// A flow of characteristic form shows deviations at integration tolerance.
inline CharacteristicFormReport check_characteristic_form(const FlowField& flow,
                                                          const Vorticity& vort,
                                                          const PhysicalConstants& c,
                                                          const CurveSampleSpec& spec = {}) {
  require_nondegenerate(vort, c);
  const double slope = characteristic_slope(vort, c);
  CharacteristicFormReport report;

  for (const auto& seed : curve_seed_lattice(spec)) {
    const auto curve =
        integrate_characteristic(seed, vort, c, {0.0, spec.s_span}, {spec.steps});
    const auto inv0 = invariants_at({curve.front().x, curve.front().y, curve.front().z}, vort, c);
    for (double t : spec.t_slices) {
      const auto& p0 = curve.front();
      const double u0 = flow.u(p0.x, p0.y, p0.z, t);
      const double v0 = flow.v(p0.x, p0.y, p0.z, t);
      const double w0 = flow.w(p0.x, p0.y, p0.z, t) - c.beta * p0.y / slope * v0;
      for (const auto& p : curve.points) {
        const double u = flow.u(p.x, p.y, p.z, t);
        const double v = flow.v(p.x, p.y, p.z, t);
        const double w = flow.w(p.x, p.y, p.z, t) - c.beta * p.y / slope * v;
        report.max_u_deviation = std::max(report.max_u_deviation, std::abs(u - u0));
        report.max_v_deviation = std::max(report.max_v_deviation, std::abs(v - v0));
        report.max_w_deviation = std::max(report.max_w_deviation, std::abs(w - w0));
      }
    }
    for (const auto& p : curve.points) {
      const auto inv = invariants_at({p.x, p.y, p.z}, vort, c);
      report.max_drift_m = std::max(report.max_drift_m,
                                    std::abs(inv.m - inv0.m) / (1.0 + std::abs(inv0.m)));
      report.max_drift_n = std::max(report.max_drift_n,
                                    std::abs(inv.n - inv0.n) / (1.0 + std::abs(inv0.n)));
    }
    ++report.curves;
  }
  return report;
}

}  // namespace betaflow
