#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "betaflow/closed_form.hpp"
#include "betaflow/column.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/grid.hpp"
#include "betaflow/stratification.hpp"

namespace betaflow {

/// Declarative surface expression: constant, affine-in-(x, y), or sinusoidal
/// with a bounded y-derivative. Arbitrary code is deliberately not accepted.
struct SurfaceSpec {
  enum class Kind { constant, affine, sinusoid };
  Kind kind = Kind::constant;
  double c0 = 0.0, cx = 0.0, cy = 0.0;        // affine
  double amp = 0.0, kx = 0.0, ky = 0.0, wt = 0.0;  // sinusoid

  SurfaceField make() const {
    switch (kind) {
      case Kind::constant: return constant_surface(c0);
      case Kind::affine: return affine_surface(c0, cx, cy);
      case Kind::sinusoid: return sinusoidal_surface(c0, amp, kx, ky, wt);
    }
    return constant_surface(c0);
  }
};

/// Surface-sequence rule for convergence families. All rules produce constant
/// surfaces strictly increasing in the layer index.
struct FamilySpec {
  enum class Kind { geometric, harmonic, random_gaps };
  Kind kind = Kind::geometric;
  double eta1 = -1.0;     ///< geometric / random_gaps: first surface level
  double ratio = 0.5;     ///< geometric: eta_j = eta1 * ratio^(j-1)
  double scale = 1.0;     ///< harmonic: eta_j = -scale / j
  std::uint32_t seed = 0; ///< random_gaps

  /// eta_j for the rule. random_gaps regenerates its draws from the seed, so
  /// the sequence is deterministic and consistent across columns.
  double surface_level(int j) const {
    switch (kind) {
      case Kind::geometric: {
        double level = eta1;
        for (int i = 1; i < j; ++i) level *= ratio;
        return level;
      }
      case Kind::harmonic: return -scale / static_cast<double>(j);
      case Kind::random_gaps: {
        // gaps U_i * 2^-(i+1) with U_i in [0.75, 1.25]; summable and termwise
        // decreasing, so the surface sequence converges from below.
        std::uint64_t state = 0x9e3779b97f4a7c15ull ^ seed;
        auto next_uniform = [&state]() {
          state ^= state << 13;
          state ^= state >> 7;
          state ^= state << 17;
          return 0.75 + 0.5 * (static_cast<double>(state >> 11) * 0x1.0p-53);
        };
        double level = eta1;
        double gap_scale = 0.25;  // 2^-(i+1) for i = 1
        for (int i = 1; i < j; ++i) {
          level += next_uniform() * gap_scale;
          gap_scale *= 0.5;
        }
        return level;
      }
    }
    return eta1;
  }
};

/// Family of uniform-density constant-surface columns following a FamilySpec.
inline ColumnFamily make_family(const FamilySpec& spec, double depth, double density,
                                double atm_pressure) {
  return [spec, depth, density, atm_pressure](int n) {
    return make_uniform_column(
        n, depth, atm_pressure, [density](int) { return density; },
        [spec](int j) { return spec.surface_level(j); });
  };
}

struct LayerConfig {
  double density = 0.0;
  Vorticity vorticity;
};

/// Everything a command run needs, parsed from one config file. Constants
/// default to Earth values; column and grid must be spelled out by the
/// sections that need them.
struct RunConfig {
  std::string source_name;
  std::string raw_text;

  // [constants]
  double omega = 7.29e-5;
  std::optional<double> beta;  ///< empty = standard 2*omega/radius
  double radius = 6.378e6;
  double gravity = 9.81;

  // [column]
  std::optional<double> depth;
  double atm_pressure = 101325.0;
  std::vector<LayerConfig> layer_configs;
  std::vector<SurfaceSpec> surface_specs;

  // [grid]
  std::optional<AxisRange> gx, gy, gz, gt;

  // [verify]
  double tolerance = 1e-8;
  double y_span = 1e6;

  // [characteristics]
  int curves = 16;
  int steps = 64;
  double s_begin = 0.0;
  double s_end = 1.0;

  // [converge]
  std::optional<FamilySpec> family;
  std::vector<int> n_values;
  std::vector<int> p_values;
  std::optional<double> family_density;

  PhysicalConstants constants() const { return make_constants(omega, beta, radius, gravity); }

  StratifiedColumn column() const {
    if (!depth || layer_configs.empty()) {
      throw ConfigError(source_name + ": [column] section with depth and at least one layer required");
    }
    if (layer_configs.size() != surface_specs.size()) {
      throw ConfigError(source_name + ": [column] declares " +
                        std::to_string(layer_configs.size()) + " layers but " +
                        std::to_string(surface_specs.size()) + " surfaces");
    }
    StratifiedColumn col;
    col.depth = *depth;
    col.atm_pressure = atm_pressure;
    for (std::size_t i = 0; i < layer_configs.size(); ++i) {
      col.layers.push_back({static_cast<int>(i + 1), layer_configs[i].density,
                            layer_configs[i].vorticity});
      col.surfaces.push_back(surface_specs[i].make());
    }
    validate_column(col);
    return col;
  }

  EvaluationGrid grid() const {
    if (!gx || !gy || !gz || !gt) {
      throw ConfigError(source_name + ": [grid] section with x, y, z and t ranges required");
    }
    EvaluationGrid g{*gx, *gy, *gz, *gt, false};
    g.validate();
    return g;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct ConfigCursor {
  const std::string& name;
  int line = 0;
  std::string key;

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(name + ":" + std::to_string(line) + ": key '" + key + "': " + message);
  }

  double number(const std::string& token) const {
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) fail("expected a number, got '" + token + "'");
    if (!std::isfinite(value)) fail("value '" + token + "' is not finite");
    return value;
  }

  int integer(const std::string& token) const {
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) fail("expected an integer, got '" + token + "'");
    return value;
  }

  void arity(const std::vector<std::string>& tokens, std::size_t expected,
             const std::string& shape) const {
    if (tokens.size() != expected) {
      fail("expected " + shape + ", got " + std::to_string(tokens.size()) + " value(s)");
    }
  }
};

inline AxisRange parse_axis(const ConfigCursor& cur, const std::string& value) {
  const auto tokens = split_tokens(value);
  cur.arity(tokens, 3, "'<min> <max> <count>'");
  AxisRange axis{cur.number(tokens[0]), cur.number(tokens[1]), cur.integer(tokens[2])};
  return axis;
}

inline SurfaceSpec parse_surface(const ConfigCursor& cur, const std::string& value) {
  const auto tokens = split_tokens(value);
  if (tokens.empty()) cur.fail("expected a surface expression");
  SurfaceSpec spec;
  if (tokens[0] == "const") {
    cur.arity(tokens, 2, "'const <level>'");
    spec.kind = SurfaceSpec::Kind::constant;
    spec.c0 = cur.number(tokens[1]);
  } else if (tokens[0] == "affine") {
    cur.arity(tokens, 4, "'affine <c0> <cx> <cy>'");
    spec.kind = SurfaceSpec::Kind::affine;
    spec.c0 = cur.number(tokens[1]);
    spec.cx = cur.number(tokens[2]);
    spec.cy = cur.number(tokens[3]);
  } else if (tokens[0] == "sin") {
    cur.arity(tokens, 6, "'sin <base> <amplitude> <kx> <ky> <phase_rate>'");
    spec.kind = SurfaceSpec::Kind::sinusoid;
    spec.c0 = cur.number(tokens[1]);
    spec.amp = cur.number(tokens[2]);
    spec.kx = cur.number(tokens[3]);
    spec.ky = cur.number(tokens[4]);
    spec.wt = cur.number(tokens[5]);
  } else {
    cur.fail("unknown surface kind '" + tokens[0] + "' (expected const, affine or sin)");
  }
  return spec;
}

inline FamilySpec parse_family(const ConfigCursor& cur, const std::string& value) {
  const auto tokens = split_tokens(value);
  if (tokens.empty()) cur.fail("expected a family rule");
  FamilySpec spec;
  if (tokens[0] == "geometric") {
    cur.arity(tokens, 3, "'geometric <eta1> <ratio>'");
    spec.kind = FamilySpec::Kind::geometric;
    spec.eta1 = cur.number(tokens[1]);
    spec.ratio = cur.number(tokens[2]);
    if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) cur.fail("ratio must lie in (0, 1)");
    if (!(spec.eta1 < 0.0)) cur.fail("eta1 must be negative");
  } else if (tokens[0] == "harmonic") {
    cur.arity(tokens, 2, "'harmonic <scale>'");
    spec.kind = FamilySpec::Kind::harmonic;
    spec.scale = cur.number(tokens[1]);
    if (!(spec.scale > 0.0)) cur.fail("scale must be positive");
  } else if (tokens[0] == "random") {
    cur.arity(tokens, 3, "'random <eta1> <seed>'");
    spec.kind = FamilySpec::Kind::random_gaps;
    spec.eta1 = cur.number(tokens[1]);
    spec.seed = static_cast<std::uint32_t>(cur.integer(tokens[2]));
    if (!(spec.eta1 <= -1.0)) cur.fail("eta1 must be <= -1 so the random gaps stay below z = 0");
  } else {
    cur.fail("unknown family kind '" + tokens[0] + "' (expected geometric, harmonic or random)");
  }
  return spec;
}

inline std::vector<int> parse_int_list(const ConfigCursor& cur, const std::string& value) {
  const auto tokens = split_tokens(value);
  if (tokens.empty()) cur.fail("expected a list of integers");
  std::vector<int> out;
  for (const auto& token : tokens) out.push_back(cur.integer(token));
  return out;
}

}  // namespace detail

/// FNV-1a over the raw config text; the provenance hash in reports.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

/// Parses the sectioned key-value config format. Unknown sections or keys are
/// errors; diagnostics carry file, line and key.
inline RunConfig parse_run_config(const std::string& text, const std::string& name) {
  RunConfig cfg;
  cfg.source_name = name;
  cfg.raw_text = text;

  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  detail::ConfigCursor cur{name, 0, {}};

  auto seen = [set = std::vector<std::string>{}](const std::string& section_key) mutable {
    for (const auto& s : set)
      if (s == section_key) return true;
    set.push_back(section_key);
    return false;
  };

  while (std::getline(in, raw_line)) {
    ++cur.line;
    std::string_view line = detail::trim(raw_line);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = detail::trim(line.substr(0, hash));
    }
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        cur.key = std::string(line);
        cur.fail("malformed section header");
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "constants" && section != "column" && section != "grid" &&
          section != "verify" && section != "characteristics" && section != "converge") {
        cur.key = section;
        cur.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      cur.key = std::string(line);
      cur.fail("expected 'key = value'");
    }
    cur.key = std::string(detail::trim(line.substr(0, eq)));
    const std::string value{detail::trim(line.substr(eq + 1))};
    if (cur.key.empty()) cur.fail("empty key");
    if (value.empty()) cur.fail("empty value");
    if (section.empty()) cur.fail("key appears before any [section]");

    const bool repeatable = (section == "column" && (cur.key == "layer" || cur.key == "surface"));
    if (!repeatable && seen(section + "." + cur.key)) cur.fail("duplicate key");

    if (section == "constants") {
      if (cur.key == "omega") cfg.omega = cur.number(value);
      else if (cur.key == "beta") {
        if (value == "standard") cfg.beta = std::nullopt;
        else cfg.beta = cur.number(value);
      } else if (cur.key == "radius") cfg.radius = cur.number(value);
      else if (cur.key == "gravity") cfg.gravity = cur.number(value);
      else cur.fail("unknown key in [constants]");
    } else if (section == "column") {
      if (cur.key == "depth") cfg.depth = cur.number(value);
      else if (cur.key == "atm_pressure") cfg.atm_pressure = cur.number(value);
      else if (cur.key == "layer") {
        const auto tokens = detail::split_tokens(value);
        cur.arity(tokens, 4, "'<density> <lambda1> <lambda2> <lambda3>'");
        cfg.layer_configs.push_back(
            {cur.number(tokens[0]),
             {cur.number(tokens[1]), cur.number(tokens[2]), cur.number(tokens[3])}});
      } else if (cur.key == "surface") {
        cfg.surface_specs.push_back(detail::parse_surface(cur, value));
      } else cur.fail("unknown key in [column]");
    } else if (section == "grid") {
      if (cur.key == "x") cfg.gx = detail::parse_axis(cur, value);
      else if (cur.key == "y") cfg.gy = detail::parse_axis(cur, value);
      else if (cur.key == "z") cfg.gz = detail::parse_axis(cur, value);
      else if (cur.key == "t") cfg.gt = detail::parse_axis(cur, value);
      else cur.fail("unknown key in [grid]");
    } else if (section == "verify") {
      if (cur.key == "tolerance") cfg.tolerance = cur.number(value);
      else if (cur.key == "y_span") cfg.y_span = cur.number(value);
      else cur.fail("unknown key in [verify]");
    } else if (section == "characteristics") {
      if (cur.key == "curves") cfg.curves = cur.integer(value);
      else if (cur.key == "steps") cfg.steps = cur.integer(value);
      else if (cur.key == "s_span") {
        const auto tokens = detail::split_tokens(value);
        cur.arity(tokens, 2, "'<s_begin> <s_end>'");
        cfg.s_begin = cur.number(tokens[0]);
        cfg.s_end = cur.number(tokens[1]);
      } else cur.fail("unknown key in [characteristics]");
    } else if (section == "converge") {
      if (cur.key == "family") cfg.family = detail::parse_family(cur, value);
      else if (cur.key == "n_values") cfg.n_values = detail::parse_int_list(cur, value);
      else if (cur.key == "p_values") cfg.p_values = detail::parse_int_list(cur, value);
      else if (cur.key == "density") cfg.family_density = cur.number(value);
      else cur.fail("unknown key in [converge]");
    }
  }
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.string());
}

}  // namespace betaflow
