#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "betaflow/errors.hpp"

namespace betaflow {

/// Inclusive range sampled with `count` evenly spaced points; count == 1
/// degenerates to the single point `min`.
struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  void validate(const char* name) const {
    if (count < 1) {
      throw ValidationError(std::string(name) + " axis: count must be >= 1, got " +
                            std::to_string(count));
    }
    if (!std::isfinite(min) || !std::isfinite(max)) {
      throw ValidationError(std::string(name) + " axis: range must be finite");
    }
    if (count > 1 && !(max > min)) {
      throw ValidationError(std::string(name) + " axis: max must exceed min when count > 1");
    }
  }

  double point(int i) const {
    if (count == 1) return min;
    return min + (max - min) * (static_cast<double>(i) / static_cast<double>(count - 1));
  }

  std::vector<double> points() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(point(i));
    return out;
  }

  /// Characteristic magnitude of the axis, for finite-difference step sizing.
  double magnitude() const { return std::max(std::abs(min), std::abs(max)); }
};

/// Cartesian evaluation lattice over (x, y, z, t). When `interior_only` is
/// set, callers that know the fluid domain must reject points outside it.
struct EvaluationGrid {
  AxisRange x, y, z, t;
  bool interior_only = false;

  void validate() const {
    x.validate("x");
    y.validate("y");
    z.validate("z");
    t.validate("t");
  }

  std::size_t size() const {
    return static_cast<std::size_t>(x.count) * static_cast<std::size_t>(y.count) *
           static_cast<std::size_t>(z.count) * static_cast<std::size_t>(t.count);
  }

  template <class F>
  void for_each(F&& f) const {
    for (int i = 0; i < x.count; ++i)
      for (int j = 0; j < y.count; ++j)
        for (int k = 0; k < z.count; ++k)
          for (int l = 0; l < t.count; ++l) f(x.point(i), y.point(j), z.point(k), t.point(l));
  }
};

}  // namespace betaflow
