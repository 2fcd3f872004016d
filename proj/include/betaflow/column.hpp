#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"

namespace betaflow {

/// One fluid layer: 1-based ordinal (1 = lowest), density and fixed vorticity.
struct LayerSpec {
  int index = 1;
  double density = 0.0;  ///< kg/m^3
  Vorticity vorticity;
};

/// lambda2 + 2*omega, the coefficient the characteristics construction divides by.
inline double characteristic_slope(const Vorticity& v, const PhysicalConstants& c) {
  return v.lambda2 + 2.0 * c.omega;
}

inline void require_nondegenerate(const Vorticity& v, const PhysicalConstants& c) {
  if (!(std::abs(characteristic_slope(v, c)) > 0.0)) {
    throw DegenerateSystemError(
        "lambda2 + 2*omega vanishes; the characteristic system is degenerate");
  }
}

/// Full problem instance: bottom at z = -depth, layers with interfaces and a
/// free surface eta_1 ... eta_n (eta_n on top), atmospheric pressure above.
struct StratifiedColumn {
  double depth = 0.0;                  ///< m, bottom at z = -depth
  std::vector<LayerSpec> layers;       ///< ordered bottom to top
  std::vector<SurfaceField> surfaces;  ///< eta_1 ... eta_n
  double atm_pressure = 0.0;           ///< Pa

  int layer_count() const { return static_cast<int>(layers.size()); }
  const LayerSpec& layer(int i) const { return layers.at(static_cast<std::size_t>(i - 1)); }
  const SurfaceField& surface(int i) const { return surfaces.at(static_cast<std::size_t>(i - 1)); }
};

/// Structural checks that need no sample point.
inline void validate_column(const StratifiedColumn& col) {
  if (col.layers.empty()) throw ValidationError("column needs at least one layer");
  if (col.layers.size() != col.surfaces.size()) {
    throw ValidationError("column has " + std::to_string(col.layers.size()) + " layers but " +
                          std::to_string(col.surfaces.size()) + " surfaces");
  }
  if (!(col.depth > 0.0)) throw ValidationError("column depth must be positive");
  for (std::size_t i = 0; i < col.layers.size(); ++i) {
    if (!(col.layers[i].density > 0.0)) {
      throw ValidationError("layer " + std::to_string(i + 1) + " density must be positive");
    }
    if (col.layers[i].index != static_cast<int>(i + 1)) {
      throw ValidationError("layer " + std::to_string(i + 1) + " carries ordinal " +
                            std::to_string(col.layers[i].index) + "; layers must be listed bottom-up");
    }
  }
}

/// Strict ordering -depth < eta_1 < ... < eta_n at one (x, y, t).
inline void validate_ordering_at(const StratifiedColumn& col, double x, double y, double t) {
  double below = -col.depth;
  for (int i = 1; i <= col.layer_count(); ++i) {
    const double eta = col.surface(i)(x, y, t);
    if (!(eta > below)) {
      throw ValidationError("surfaces are not strictly ordered at (x=" + std::to_string(x) +
                            ", y=" + std::to_string(y) + ", t=" + std::to_string(t) +
                            "): eta_" + std::to_string(i) + " = " + std::to_string(eta) +
                            " does not exceed " + std::to_string(below));
    }
    below = eta;
  }
}

/// Which layer contains height z at (x, y, t): the smallest i with z <= eta_i.
/// Throws for z below the bottom or above the free surface.
inline int layer_index_at(const StratifiedColumn& col, double x, double y, double z, double t) {
  if (z < -col.depth) {
    throw ValidationError("z = " + std::to_string(z) + " lies below the bottom z = " +
                          std::to_string(-col.depth));
  }
  for (int i = 1; i <= col.layer_count(); ++i) {
    if (z <= col.surface(i)(x, y, t)) return i;
  }
  throw ValidationError("z = " + std::to_string(z) + " lies above the free surface at (x=" +
                        std::to_string(x) + ", y=" + std::to_string(y) + ", t=" +
                        std::to_string(t) + ")");
}

}  // namespace betaflow
