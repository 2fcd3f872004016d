#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "betaflow/column.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/finite_difference.hpp"
#include "betaflow/grid.hpp"

namespace betaflow {

/// Residual statistics for one equation over an evaluation grid. Relative
/// values are normalized per point by the largest term magnitude entering the
/// equation there, so thresholds survive terms spanning many orders of
/// magnitude.
struct ResidualStats {
  std::string equation;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  std::array<double, 4> worst_point{};  ///< grid point of max_abs
  std::size_t samples = 0;
};

struct ResidualReport {
  std::vector<ResidualStats> equations;

  const ResidualStats& find(std::string_view id) const {
    for (const auto& e : equations)
      if (e.equation == id) return e;
    throw std::out_of_range("no equation '" + std::string(id) + "' in residual report");
  }

  double max_relative() const {
    double m = 0.0;
    for (const auto& e : equations) m = std::max(m, e.max_rel);
    return m;
  }

  bool all_relative_below(double tol) const { return max_relative() < tol; }
};

namespace detail {

class StatsAccumulator {
 public:
  explicit StatsAccumulator(std::string equation) : stats_{} {
    stats_.equation = std::move(equation);
  }

  void add(double residual, double term_magnitude, std::array<double, 4> point) {
    const double abs = std::abs(residual);
    const double rel = term_magnitude > 0.0 ? abs / term_magnitude : 0.0;
    if (stats_.samples == 0 || abs > stats_.max_abs) {
      stats_.max_abs = abs;
      stats_.worst_point = point;
    }
    stats_.max_rel = std::max(stats_.max_rel, rel);
    sum_abs_ += abs;
    sum_rel_ += rel;
    ++stats_.samples;
  }

  ResidualStats finish() const {
    ResidualStats out = stats_;
    if (out.samples > 0) {
      out.mean_abs = sum_abs_ / static_cast<double>(out.samples);
      out.mean_rel = sum_rel_ / static_cast<double>(out.samples);
    }
    return out;
  }

 private:
  ResidualStats stats_;
  double sum_abs_ = 0.0;
  double sum_rel_ = 0.0;
};

inline double max_magnitude(std::initializer_list<double> terms) {
  double m = 0.0;
  for (double v : terms) m = std::max(m, std::abs(v));
  return m;
}

/// Fill per-axis characteristic magnitudes from the grid unless already set.
inline FdOptions fd_for_grid(const EvaluationGrid& grid, FdOptions fd) {
  if (!fd.x_scale) fd.x_scale = grid.x.magnitude();
  if (!fd.y_scale) fd.y_scale = grid.y.magnitude();
  if (!fd.z_scale) fd.z_scale = grid.z.magnitude();
  if (!fd.t_scale) fd.t_scale = grid.t.magnitude();
  return fd;
}

template <class F>
auto eval_at(F&& f, double x, double y, double z, double t) {
  try {
    return f(x, y, z, t);
  } catch (const std::exception& e) {
    throw ValidationError("field evaluation failed at (x=" + std::to_string(x) + ", y=" +
                          std::to_string(y) + ", z=" + std::to_string(z) + ", t=" +
                          std::to_string(t) + "): " + e.what());
  }
}

}  // namespace detail

/// Residuals of the three momentum components, in pressure-gradient units:
///   x: rho*(u_t + u u_x + v u_y + w u_z + 2*omega*w - beta*y*v) + P_x
///   y: rho*(v_t + u v_x + v v_y + w v_z + beta*y*u + omega^2 y) + P_y
///   z: rho*(w_t + u w_x + v w_y + w w_z - 2*omega*u - omega^2 R + g) + P_z
/// All derivatives by central differences.
inline ResidualReport momentum_residual(const FlowField& flow, const PressureField& pressure,
                                        double density, const PhysicalConstants& c,
                                        const EvaluationGrid& grid, FdOptions fd = {}) {
  grid.validate();
  if (!(density > 0.0)) throw ValidationError("density must be positive");
  fd = detail::fd_for_grid(grid, fd);

  detail::StatsAccumulator rx("momentum-x"), ry("momentum-y"), rz("momentum-z");
  grid.for_each([&](double x, double y, double z, double t) {
    const std::array<double, 4> p{x, y, z, t};
    const double u = detail::eval_at(flow.u, x, y, z, t);
    const double v = detail::eval_at(flow.v, x, y, z, t);
    const double w = detail::eval_at(flow.w, x, y, z, t);
    auto d = [&](const ScalarField& f, Axis a) {
      return detail::eval_at(
          [&](double xx, double yy, double zz, double tt) { return partial(f, a, xx, yy, zz, tt, fd); },
          x, y, z, t);
    };
    const double px = d(pressure.value, Axis::x);
    const double py = d(pressure.value, Axis::y);
    const double pz = d(pressure.value, Axis::z);
    const double rho = density;
    const double om2 = c.omega * c.omega;

    {
      const double t1 = rho * d(flow.u, Axis::t), t2 = rho * u * d(flow.u, Axis::x),
                   t3 = rho * v * d(flow.u, Axis::y), t4 = rho * w * d(flow.u, Axis::z),
                   t5 = rho * 2.0 * c.omega * w, t6 = -rho * c.beta * y * v;
      rx.add(t1 + t2 + t3 + t4 + t5 + t6 + px,
             detail::max_magnitude({t1, t2, t3, t4, t5, t6, px}), p);
    }
    {
      const double t1 = rho * d(flow.v, Axis::t), t2 = rho * u * d(flow.v, Axis::x),
                   t3 = rho * v * d(flow.v, Axis::y), t4 = rho * w * d(flow.v, Axis::z),
                   t5 = rho * c.beta * y * u, t6 = rho * om2 * y;
      ry.add(t1 + t2 + t3 + t4 + t5 + t6 + py,
             detail::max_magnitude({t1, t2, t3, t4, t5, t6, py}), p);
    }
    {
      const double t1 = rho * d(flow.w, Axis::t), t2 = rho * u * d(flow.w, Axis::x),
                   t3 = rho * v * d(flow.w, Axis::y), t4 = rho * w * d(flow.w, Axis::z),
                   t5 = -rho * 2.0 * c.omega * u, t6 = -rho * om2 * c.radius,
                   t7 = rho * c.gravity;
      rz.add(t1 + t2 + t3 + t4 + t5 + t6 + t7 + pz,
             detail::max_magnitude({t1, t2, t3, t4, t5, t6, t7, pz}), p);
    }
  });
  return {{rx.finish(), ry.finish(), rz.finish()}};
}

/// Residuals of the transformed momentum system, for a caller-supplied
/// transformed pressure:
///   x: rho*(u_t + adv u + 2*omega*w - beta*y*v) + Pt_x
///   y: rho*(v_t + adv v + beta*y*u) + Pt_y
///   z: rho*(w_t + adv w - 2*omega*u) + Pt_z
/// The caller chooses the transform direction; the two directions differ by
/// the sign of the y^2 and z shifts, and only one of them makes this system
/// equivalent to the untransformed momentum equations.
inline ResidualReport transformed_momentum_residual(const FlowField& flow,
                                                    const PressureField& pressure_tilde,
                                                    double density, const PhysicalConstants& c,
                                                    const EvaluationGrid& grid,
                                                    FdOptions fd = {}) {
  grid.validate();
  if (!(density > 0.0)) throw ValidationError("density must be positive");
  fd = detail::fd_for_grid(grid, fd);

  detail::StatsAccumulator rx("transformed-momentum-x"), ry("transformed-momentum-y"),
      rz("transformed-momentum-z");
  grid.for_each([&](double x, double y, double z, double t) {
    const std::array<double, 4> p{x, y, z, t};
    const double u = detail::eval_at(flow.u, x, y, z, t);
    const double v = detail::eval_at(flow.v, x, y, z, t);
    const double w = detail::eval_at(flow.w, x, y, z, t);
    auto d = [&](const ScalarField& f, Axis a) {
      return detail::eval_at(
          [&](double xx, double yy, double zz, double tt) { return partial(f, a, xx, yy, zz, tt, fd); },
          x, y, z, t);
    };
    const double px = d(pressure_tilde.value, Axis::x);
    const double py = d(pressure_tilde.value, Axis::y);
    const double pz = d(pressure_tilde.value, Axis::z);
    const double rho = density;

    {
      const double t1 = rho * d(flow.u, Axis::t), t2 = rho * u * d(flow.u, Axis::x),
                   t3 = rho * v * d(flow.u, Axis::y), t4 = rho * w * d(flow.u, Axis::z),
                   t5 = rho * 2.0 * c.omega * w, t6 = -rho * c.beta * y * v;
      rx.add(t1 + t2 + t3 + t4 + t5 + t6 + px,
             detail::max_magnitude({t1, t2, t3, t4, t5, t6, px}), p);
    }
    {
      const double t1 = rho * d(flow.v, Axis::t), t2 = rho * u * d(flow.v, Axis::x),
                   t3 = rho * v * d(flow.v, Axis::y), t4 = rho * w * d(flow.v, Axis::z),
                   t5 = rho * c.beta * y * u;
      ry.add(t1 + t2 + t3 + t4 + t5 + py, detail::max_magnitude({t1, t2, t3, t4, t5, py}), p);
    }
    {
      const double t1 = rho * d(flow.w, Axis::t), t2 = rho * u * d(flow.w, Axis::x),
                   t3 = rho * v * d(flow.w, Axis::y), t4 = rho * w * d(flow.w, Axis::z),
                   t5 = -rho * 2.0 * c.omega * u;
      rz.add(t1 + t2 + t3 + t4 + t5 + pz, detail::max_magnitude({t1, t2, t3, t4, t5, pz}), p);
    }
  });
  return {{rx.finish(), ry.finish(), rz.finish()}};
}

/// max |u_x + v_y + w_z| over the grid.
inline ResidualReport divergence_residual(const FlowField& flow, const EvaluationGrid& grid,
                                          FdOptions fd = {}) {
  grid.validate();
  fd = detail::fd_for_grid(grid, fd);
  detail::StatsAccumulator acc("divergence");
  grid.for_each([&](double x, double y, double z, double t) {
    const double ux = detail::eval_at(
        [&](double a, double b, double cc, double dd) { return partial(flow.u, Axis::x, a, b, cc, dd, fd); },
        x, y, z, t);
    const double vy = partial(flow.v, Axis::y, x, y, z, t, fd);
    const double wz = partial(flow.w, Axis::z, x, y, z, t, fd);
    acc.add(ux + vy + wz, detail::max_magnitude({ux, vy, wz}), {x, y, z, t});
  });
  return {{acc.finish()}};
}

/// Componentwise |computed curl - declared vorticity| over the grid, plus a
/// constancy entry measuring how far the computed curl strays from its grid
/// mean (the fixed-vorticity assumption).
inline ResidualReport vorticity_residual(const FlowField& flow, const Vorticity& declared,
                                         const EvaluationGrid& grid, FdOptions fd = {}) {
  grid.validate();
  fd = detail::fd_for_grid(grid, fd);

  std::vector<std::array<double, 4>> points;
  std::vector<Vorticity> curls;
  points.reserve(grid.size());
  curls.reserve(grid.size());
  grid.for_each([&](double x, double y, double z, double t) {
    try {
      curls.push_back(fd_curl(flow, x, y, z, t, fd));
    } catch (const std::exception& e) {
      throw ValidationError("field evaluation failed at (x=" + std::to_string(x) + ", y=" +
                            std::to_string(y) + ", z=" + std::to_string(z) + ", t=" +
                            std::to_string(t) + "): " + e.what());
    }
    points.push_back({x, y, z, t});
  });

  Vorticity mean{};
  for (const auto& cu : curls) {
    mean.lambda1 += cu.lambda1;
    mean.lambda2 += cu.lambda2;
    mean.lambda3 += cu.lambda3;
  }
  const double inv_n = curls.empty() ? 0.0 : 1.0 / static_cast<double>(curls.size());
  mean.lambda1 *= inv_n;
  mean.lambda2 *= inv_n;
  mean.lambda3 *= inv_n;
  const double mean_mag =
      detail::max_magnitude({mean.lambda1, mean.lambda2, mean.lambda3});

  detail::StatsAccumulator cx("vorticity-consistency-x"), cy("vorticity-consistency-y"),
      cz("vorticity-consistency-z"), cc("vorticity-constancy");
  for (std::size_t i = 0; i < curls.size(); ++i) {
    const auto& cu = curls[i];
    cx.add(cu.lambda1 - declared.lambda1,
           detail::max_magnitude({cu.lambda1, declared.lambda1}), points[i]);
    cy.add(cu.lambda2 - declared.lambda2,
           detail::max_magnitude({cu.lambda2, declared.lambda2}), points[i]);
    cz.add(cu.lambda3 - declared.lambda3,
           detail::max_magnitude({cu.lambda3, declared.lambda3}), points[i]);
    const double dev = detail::max_magnitude({cu.lambda1 - mean.lambda1,
                                              cu.lambda2 - mean.lambda2,
                                              cu.lambda3 - mean.lambda3});
    const double local = detail::max_magnitude({cu.lambda1, cu.lambda2, cu.lambda3});
    cc.add(dev, std::max(mean_mag, local), points[i]);
  }
  return {{cx.finish(), cy.finish(), cz.finish(), cc.finish()}};
}

/// Residuals of the reduced linear system the constant-vorticity assumption
/// produces, with L = lambda1 d_x + (2*omega + lambda2) d_y + (lambda3 + beta*y) d_z:
///   u: L u = 0,  v: L v = 0,  w: L w - beta*v = 0.
inline ResidualReport linear_system_residual(const FlowField& flow, const Vorticity& vort,
                                             const PhysicalConstants& c,
                                             const EvaluationGrid& grid, FdOptions fd = {}) {
  grid.validate();
  require_nondegenerate(vort, c);
  fd = detail::fd_for_grid(grid, fd);

  detail::StatsAccumulator ru("linear-system-u"), rv("linear-system-v"), rw("linear-system-w");
  grid.for_each([&](double x, double y, double z, double t) {
    const std::array<double, 4> p{x, y, z, t};
    auto apply = [&](const ScalarField& f, detail::StatsAccumulator& acc, double extra) {
      const double fx = detail::eval_at(
          [&](double a, double b, double cc2, double dd) { return partial(f, Axis::x, a, b, cc2, dd, fd); },
          x, y, z, t);
      const double fy = partial(f, Axis::y, x, y, z, t, fd);
      const double fz = partial(f, Axis::z, x, y, z, t, fd);
      const double t1 = vort.lambda1 * fx;
      const double t2 = (2.0 * c.omega + vort.lambda2) * fy;
      const double t3 = (vort.lambda3 + c.beta * y) * fz;
      acc.add(t1 + t2 + t3 + extra, detail::max_magnitude({t1, t2, t3, extra}), p);
    };
    apply(flow.u, ru, 0.0);
    apply(flow.v, rv, 0.0);
    const double v = detail::eval_at(flow.v, x, y, z, t);
    apply(flow.w, rw, -c.beta * v);
  });
  return {{ru.finish(), rv.finish(), rw.finish()}};
}

/// Sample lattice over (x, y, t) for surface-bound checks.
struct BoundarySampleSpec {
  AxisRange x{-1e5, 1e5, 5};
  AxisRange y{-1e5, 1e5, 5};
  AxisRange t{0.0, 3600.0, 3};
};

/// Boundary-condition residuals for a full column:
///   bottom-bc:    |w_1| on z = -depth          (m/s; relative = absolute)
///   surface-bc:   |P_n - P_atm| on z = eta_n   (relative to |P_atm|)
///   interface-bc: |P_i - P_{i+1}| on z = eta_i (relative to |P_atm|)
inline ResidualReport boundary_residuals(const StratifiedColumn& col,
                                         const std::vector<FlowField>& flows,
                                         const std::vector<PressureField>& pressures,
                                         const PhysicalConstants& /*c*/,
                                         const BoundarySampleSpec& spec = {}) {
  validate_column(col);
  const int n = col.layer_count();
  if (static_cast<int>(flows.size()) != n || static_cast<int>(pressures.size()) != n) {
    throw ValidationError("per-layer field lists must match the column layer count (" +
                          std::to_string(n) + "), got " + std::to_string(flows.size()) +
                          " flows and " + std::to_string(pressures.size()) + " pressures");
  }
  spec.x.validate("x");
  spec.y.validate("y");
  spec.t.validate("t");

  const double p_scale = std::abs(col.atm_pressure) > 0.0 ? std::abs(col.atm_pressure) : 1.0;
  detail::StatsAccumulator bottom("bottom-bc"), surface("surface-bc"), interface_("interface-bc");

  for (double x : spec.x.points()) {
    for (double y : spec.y.points()) {
      for (double t : spec.t.points()) {
        validate_ordering_at(col, x, y, t);
        const double wb = detail::eval_at(flows.front().w, x, y, -col.depth, t);
        bottom.add(wb, 1.0, {x, y, -col.depth, t});

        const double eta_n = col.surface(n)(x, y, t);
        const double pn = detail::eval_at(pressures.back().value, x, y, eta_n, t);
        surface.add(pn - col.atm_pressure, p_scale, {x, y, eta_n, t});

        for (int i = 1; i < n; ++i) {
          const double eta_i = col.surface(i)(x, y, t);
          const double lower = detail::eval_at(pressures[static_cast<std::size_t>(i - 1)].value,
                                               x, y, eta_i, t);
          const double upper = detail::eval_at(pressures[static_cast<std::size_t>(i)].value,
                                               x, y, eta_i, t);
          interface_.add(lower - upper, p_scale, {x, y, eta_i, t});
        }
      }
    }
  }
  ResidualReport report;
  report.equations.push_back(bottom.finish());
  report.equations.push_back(surface.finish());
  if (n > 1) report.equations.push_back(interface_.finish());
  return report;
}

struct BoundednessSpec {
  double x = 0.0;
  double t = 0.0;
  int samples_per_side = 32;
};

/// Verdict of the y-variation check: samples of P_y + P_z * eta_y on the
/// surface, the max magnitude seen, and a least-squares estimate of the
/// linear-in-y growth coefficient.
struct BoundednessReport {
  double max_abs = 0.0;
  double linear_coeff = 0.0;  ///< fitted d/dy of the sampled variation
  double intercept = 0.0;
  bool within_bound = true;   ///< max_abs <= M when a bound was given
  double y_span = 0.0;
  std::size_t samples = 0;
};

/// Samples [P_y + P_z * eta_y] on z = eta(x, y, t) over y in [-y_span, y_span].
/// A bounded solution shows a vanishing fitted linear coefficient; a y^2
/// pressure term shows up as a linear growth of exactly twice its coefficient.
inline BoundednessReport y_boundedness_check(const PressureField& pressure,
                                             const SurfaceField& surface,
                                             std::optional<double> bound, double y_span,
                                             const BoundednessSpec& spec = {},
                                             FdOptions fd = {}) {
  if (!(y_span > 0.0)) throw ValidationError("y_span must be positive");
  if (spec.samples_per_side < 1) throw ValidationError("need at least one sample per side");
  if (!fd.y_scale) fd.y_scale = y_span;

  BoundednessReport report;
  report.y_span = y_span;

  const int m = spec.samples_per_side;
  double sum_y = 0.0, sum_yy = 0.0, sum_g = 0.0, sum_yg = 0.0;
  for (int i = -m; i <= m; ++i) {
    const double y = y_span * (static_cast<double>(i) / m);
    const double z = surface(spec.x, y, spec.t);
    if (!fd.z_scale) fd.z_scale = std::max(1.0, std::abs(z));
    const double py = partial(pressure.value, Axis::y, spec.x, y, z, spec.t, fd);
    const double pz = partial(pressure.value, Axis::z, spec.x, y, z, spec.t, fd);
    const double slope = surface_y_slope(surface, spec.x, y, spec.t);
    const double g = py + pz * slope;
    report.max_abs = std::max(report.max_abs, std::abs(g));
    sum_y += y;
    sum_yy += y * y;
    sum_g += g;
    sum_yg += y * g;
    ++report.samples;
  }
  const double count = static_cast<double>(report.samples);
  const double denom = sum_yy - sum_y * sum_y / count;
  report.linear_coeff = denom > 0.0 ? (sum_yg - sum_y * sum_g / count) / denom : 0.0;
  report.intercept = (sum_g - report.linear_coeff * sum_y) / count;
  if (bound) report.within_bound = report.max_abs <= *bound * (1.0 + 1e-12) + 1e-12;
  return report;
}

}  // namespace betaflow
