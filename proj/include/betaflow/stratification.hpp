#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "betaflow/closed_form.hpp"
#include "betaflow/column.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/grid.hpp"

namespace betaflow {

/// Per-layer affine pressures produced by downward interface propagation at
/// one (x, y, t). Layer i occupies layers[i-1].
struct LayeredPressureSolution {
  std::vector<PressureAffine> layers;
  double kappa = 0.0;
  SignConvention sign = SignConvention::oracle;  ///< provenance of kappa

  int layer_count() const { return static_cast<int>(layers.size()); }
  const PressureAffine& layer(int i) const { return layers.at(static_cast<std::size_t>(i - 1)); }
};

/// Builds every layer's pressure by hydrostatic propagation from the free
/// surface: P_n(z) = rho_n*kappa*(z - eta_n) + P_atm, then descending
/// P_i(z) = rho_i*kappa*(z - eta_i) + P_{i+1}(eta_i). Interface continuity
/// holds by construction for either sign of kappa.
inline LayeredPressureSolution propagate_pressures(const StratifiedColumn& col, double kappa,
                                                   double x, double y, double t,
                                                   SignConvention sign = SignConvention::oracle) {
  validate_column(col);
  if (!(std::abs(kappa) > 0.0) || !std::isfinite(kappa)) {
    throw ValidationError("vertical coefficient kappa must be finite and nonzero");
  }
  validate_ordering_at(col, x, y, t);

  const int n = col.layer_count();
  LayeredPressureSolution sol;
  sol.kappa = kappa;
  sol.sign = sign;
  sol.layers.resize(static_cast<std::size_t>(n));

  const double eta_n = col.surface(n)(x, y, t);
  sol.layers[static_cast<std::size_t>(n - 1)].z_coeff = col.layer(n).density * kappa;
  sol.layers[static_cast<std::size_t>(n - 1)].offset =
      col.atm_pressure - col.layer(n).density * kappa * eta_n;

  for (int i = n - 1; i >= 1; --i) {
    const double eta_i = col.surface(i)(x, y, t);
    const auto& above = sol.layers[static_cast<std::size_t>(i)];
    const double interface_pressure = above.z_coeff * eta_i + above.offset;
    auto& here = sol.layers[static_cast<std::size_t>(i - 1)];
    here.z_coeff = col.layer(i).density * kappa;
    here.offset = interface_pressure - col.layer(i).density * kappa * eta_i;
  }
  return sol;
}

/// Closed formula for the i-th layer pressure at (x, y, z, t):
///   rho_i*kappa*z + sum_{j=i}^{n-1} kappa*rho_{j+1}*(eta_j - eta_{j+1})
///   - kappa*rho_i*eta_i + P_atm.
/// Agrees with propagate_pressures identically; the recursion and the formula
/// verify each other.
inline double pressure_n_layer_formula(int i, const StratifiedColumn& col, double kappa,
                                       double x, double y, double z, double t) {
  validate_column(col);
  const int n = col.layer_count();
  if (i < 1 || i > n) {
    throw ValidationError("layer index " + std::to_string(i) + " out of range 1.." +
                          std::to_string(n));
  }
  double sum = 0.0;
  for (int j = i; j <= n - 1; ++j) {
    sum += kappa * col.layer(j + 1).density *
           (col.surface(j)(x, y, t) - col.surface(j + 1)(x, y, t));
  }
  return col.layer(i).density * kappa * z + sum -
         kappa * col.layer(i).density * col.surface(i)(x, y, t) + col.atm_pressure;
}

/// Equal densities and a flat free surface z = d0 collapse every layer's
/// pressure to the single hydrostatic column P(z) = rho*kappa*(z - d0) + P_atm,
/// independent of the number of layers and of the internal surfaces.
inline PressureAffine flat_top_collapse(const StratifiedColumn& col, double kappa) {
  validate_column(col);
  if (!(std::abs(kappa) > 0.0) || !std::isfinite(kappa)) {
    throw ValidationError("vertical coefficient kappa must be finite and nonzero");
  }
  const int n = col.layer_count();
  const double rho = col.layer(1).density;
  for (int i = 2; i <= n; ++i) {
    if (std::abs(col.layer(i).density - rho) > 1e-12 * rho) {
      throw ValidationError("flat-top collapse requires equal densities; layer " +
                            std::to_string(i) + " differs from layer 1");
    }
  }
  const double d0 = col.surface(n)(0.0, 0.0, 0.0);
  for (double x : {-1e5, 0.0, 1e5}) {
    for (double t : {0.0, 3600.0}) {
      const double eta = col.surface(n)(x, 0.5 * x, t);
      if (std::abs(eta - d0) > 1e-9 * (1.0 + std::abs(d0))) {
        throw ValidationError("flat-top collapse requires a constant free surface; eta_n varies");
      }
    }
  }

  PressureAffine collapsed;
  collapsed.z_coeff = rho * kappa;
  collapsed.offset = col.atm_pressure - rho * kappa * d0;

  // Every layer must reproduce the collapsed column.
  for (int i = 1; i <= n; ++i) {
    const double probe_z = -col.depth + (static_cast<double>(i) / (n + 1)) * col.depth;
    const double via_layer = pressure_n_layer_formula(i, col, kappa, 0.0, 0.0, probe_z, 0.0);
    const double direct = collapsed(0.0, 0.0, probe_z, 0.0);
    const double scale = std::max({std::abs(via_layer), std::abs(direct), 1.0});
    if (std::abs(via_layer - direct) > 1e-9 * scale) {
      throw ValidationError("layer " + std::to_string(i) +
                            " pressure does not collapse onto the flat-top column");
    }
  }
  return collapsed;
}

/// A rule producing an n-layer column for each requested n. Columns of
/// different n must share the bottom depth and the bottom layer.
using ColumnFamily = std::function<StratifiedColumn(int)>;

/// Sample lattice for sup estimation. The pressure difference between two
/// family members is independent of z, but the evaluation still happens at a
/// physical height (default 3/4 of the way down).
struct ConvergenceSampleSpec {
  AxisRange x{-1e5, 1e5, 9};
  AxisRange y{-1e5, 1e5, 9};
  AxisRange t{0.0, 3600.0, 5};
  std::optional<double> z;
};

struct ConvergencePair {
  int n = 0;
  int p = 0;
  double observed_sup = 0.0;  ///< sup over samples of |P_1^{n+p} - P_1^n|
  double bound = 0.0;         ///< |kappa| * sup rho * sup_pt sum |eta_j - eta_{j+1}|
  bool bound_satisfied = false;
};

/// Observed bottom-layer pressure differences against the telescoping bound,
/// for every requested (n, p).
struct ConvergenceStudy {
  std::vector<int> n_values;
  std::vector<int> p_values;
  std::vector<ConvergencePair> pairs;  ///< n-major, then p, in input order
  double sup_density = 0.0;
  bool densities_bounded = false;
  bool surfaces_uniformly_convergent = false;  ///< estimated from sampled surface tails
  bool bounds_all_satisfied = false;
  bool sup_monotone_in_n = false;  ///< per fixed p, observed sup nonincreasing in n

  const ConvergencePair& pair(int n, int p) const {
    for (const auto& e : pairs)
      if (e.n == n && e.p == p) return e;
    throw ValidationError("no (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                          ") entry in convergence study");
  }
};

/// Runs the layered-pressure convergence experiment: for each (n, p) the sup
/// of |P_1^{n+p} - P_1^n| over the sample lattice is compared against the
/// telescoping bound built from the family's surface gaps up to index n+p+1.
inline ConvergenceStudy convergence_study(const ColumnFamily& family,
                                          std::vector<int> n_values, std::vector<int> p_values,
                                          double kappa,
                                          const ConvergenceSampleSpec& spec = {}) {
  if (n_values.empty() || p_values.empty()) {
    throw ValidationError("convergence study needs nonempty n and p lists");
  }
  for (int n : n_values)
    if (n < 1) throw ValidationError("layer counts must be >= 1");
  for (int p : p_values)
    if (p < 0) throw ValidationError("p offsets must be >= 0");
  if (!(std::abs(kappa) > 0.0) || !std::isfinite(kappa)) {
    throw ValidationError("vertical coefficient kappa must be finite and nonzero");
  }
  spec.x.validate("x");
  spec.y.validate("y");
  spec.t.validate("t");

  const int n_max = *std::max_element(n_values.begin(), n_values.end());
  const int p_max = *std::max_element(p_values.begin(), p_values.end());
  const int top = n_max + p_max + 1;

  const StratifiedColumn reference = family(top);
  validate_column(reference);

  ConvergenceStudy study;
  study.n_values = n_values;
  study.p_values = p_values;

  study.sup_density = 0.0;
  for (const auto& layer : reference.layers) {
    study.sup_density = std::max(study.sup_density, layer.density);
  }
  study.densities_bounded = std::isfinite(study.sup_density) && study.sup_density > 0.0;

  auto check_consistent = [&](const StratifiedColumn& col, int n) {
    validate_column(col);
    if (col.layer_count() != n) {
      throw ValidationError("family produced " + std::to_string(col.layer_count()) +
                            " layers when asked for " + std::to_string(n));
    }
    if (std::abs(col.depth - reference.depth) > 1e-12 * (1.0 + std::abs(reference.depth)) ||
        std::abs(col.layer(1).density - reference.layer(1).density) >
            1e-12 * reference.layer(1).density) {
      throw ValidationError("family columns disagree on the bottom layer (depth or density)");
    }
  };

  const double z_eval = spec.z ? *spec.z : -0.75 * reference.depth;
  const auto xs = spec.x.points();
  const auto ys = spec.y.points();
  const auto ts = spec.t.points();

  // eta Cauchy estimate data: sup_pt |eta_{n+p} - eta_n| per (n, p).
  std::vector<double> eta_diffs;

  for (int n : n_values) {
    const StratifiedColumn col_n = family(n);
    check_consistent(col_n, n);
    for (int p : p_values) {
      const StratifiedColumn col_np = family(n + p);
      check_consistent(col_np, n + p);

      double observed = 0.0;
      double bound_sup = 0.0;
      double eta_diff = 0.0;
      for (double x : xs) {
        for (double y : ys) {
          for (double t : ts) {
            validate_ordering_at(col_n, x, y, t);
            validate_ordering_at(col_np, x, y, t);
            const double pa = pressure_n_layer_formula(1, col_n, kappa, x, y, z_eval, t);
            const double pb = pressure_n_layer_formula(1, col_np, kappa, x, y, z_eval, t);
            observed = std::max(observed, std::abs(pb - pa));

            double gap_sum = 0.0;
            for (int j = n; j <= n + p; ++j) {
              gap_sum += std::abs(reference.surface(j)(x, y, t) -
                                  reference.surface(j + 1)(x, y, t));
            }
            bound_sup = std::max(bound_sup, gap_sum);

            eta_diff = std::max(eta_diff, std::abs(col_np.surface(n + p)(x, y, t) -
                                                   col_n.surface(n)(x, y, t)));
          }
        }
      }
      ConvergencePair entry;
      entry.n = n;
      entry.p = p;
      entry.observed_sup = observed;
      entry.bound = std::abs(kappa) * study.sup_density * bound_sup;
      entry.bound_satisfied = entry.observed_sup <= entry.bound + 1e-10;
      study.pairs.push_back(entry);
      eta_diffs.push_back(eta_diff);
    }
  }

  study.bounds_all_satisfied = true;
  for (const auto& e : study.pairs) study.bounds_all_satisfied &= e.bound_satisfied;

  // Monotone nonincreasing sup differences in n, per fixed p.
  study.sup_monotone_in_n = true;
  study.surfaces_uniformly_convergent = true;
  for (std::size_t pi = 0; pi < p_values.size(); ++pi) {
    for (std::size_t ni = 1; ni < n_values.size(); ++ni) {
      const auto& prev = study.pairs[(ni - 1) * p_values.size() + pi];
      const auto& cur = study.pairs[ni * p_values.size() + pi];
      if (cur.observed_sup > prev.observed_sup + 1e-12 * (1.0 + prev.observed_sup)) {
        study.sup_monotone_in_n = false;
      }
      const double ed_prev = eta_diffs[(ni - 1) * p_values.size() + pi];
      const double ed_cur = eta_diffs[ni * p_values.size() + pi];
      if (ed_cur > ed_prev + 1e-12 * (1.0 + ed_prev)) {
        study.surfaces_uniformly_convergent = false;
      }
    }
  }
  return study;
}

/// Constant-surface column with n equal-vorticity layers; the workhorse for
/// family construction.
inline StratifiedColumn make_uniform_column(int n, double depth, double atm_pressure,
                                            const std::function<double(int)>& density,
                                            const std::function<double(int)>& surface_level) {
  StratifiedColumn col;
  col.depth = depth;
  col.atm_pressure = atm_pressure;
  for (int j = 1; j <= n; ++j) {
    col.layers.push_back({j, density(j), Vorticity{}});
    col.surfaces.push_back(constant_surface(surface_level(j)));
  }
  return col;
}

}  // namespace betaflow
