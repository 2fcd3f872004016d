#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "betaflow/characteristics.hpp"
#include "betaflow/closed_form.hpp"
#include "betaflow/column.hpp"
#include "betaflow/config.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/grid.hpp"
#include "betaflow/report.hpp"
#include "betaflow/stratification.hpp"
#include "betaflow/verifier.hpp"

namespace betaflow {

/// Options shared by every subcommand; values come from the command line and
/// override the config file where both exist.
struct CliOptions {
  std::string out_dir = ".";
  std::optional<double> tolerance;
  std::optional<SignConvention> sign;
};

namespace cli_detail {

inline SignConvention effective_sign(const CliOptions& opt) {
  return opt.sign.value_or(SignConvention::oracle);
}

inline std::filesystem::path prepare_output(const CliOptions& opt, const std::string& file) {
  std::filesystem::path dir(opt.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir / file;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("failed writing output file '" + path.string() + "'");
}

/// Layer pressure as a full (x, y, z, t) field via the closed n-layer formula.
inline PressureField layer_pressure_field(const StratifiedColumn& col, int i, double kappa) {
  return {[col, i, kappa](double x, double y, double z, double t) {
    return pressure_n_layer_formula(i, col, kappa, x, y, z, t);
  }};
}

inline void provenance(ReportDocument& doc, const RunConfig& cfg, const PhysicalConstants& c,
                       SignConvention sign, const VerticalCoefficient& vc) {
  doc.kv("config", cfg.source_name);
  doc.kv("config_hash", to_hex(fnv1a64(cfg.raw_text)));
  doc.kv("sign", to_string(sign));
  doc.kv("omega", c.omega);
  doc.kv("beta", c.beta);
  doc.kv("beta_source", c.beta_derived ? "standard" : "explicit");
  doc.kv("radius", c.radius);
  doc.kv("gravity", c.gravity);
  doc.kv("u_closed_form", closed_form_u(c));
  doc.kv("kappa_paper", vc.paper);
  doc.kv("kappa_oracle", vc.oracle);
  doc.kv("kappa_used", vc.select(sign));
}

inline void residual_lines(ReportDocument& doc, const ResidualReport& report,
                           const std::string& prefix, double tolerance,
                           std::vector<std::string>& failing) {
  for (const auto& e : report.equations) {
    const std::string id = prefix.empty() ? e.equation : prefix + "." + e.equation;
    const bool ok = e.max_rel < tolerance;
    doc.line(id + ": max_abs=" + format_g17(e.max_abs) + " max_rel=" + format_g17(e.max_rel) +
             " mean_abs=" + format_g17(e.mean_abs) + " worst=(" + format_g17(e.worst_point[0]) +
             "," + format_g17(e.worst_point[1]) + "," + format_g17(e.worst_point[2]) + "," +
             format_g17(e.worst_point[3]) + ") " + (ok ? "pass" : "FAIL"));
    if (!ok) failing.push_back(id);
  }
}

}  // namespace cli_detail

/// `evaluate`: closed-form velocity and layered pressure over the grid, one
/// delimited row per point. The pressure column follows the layer containing z.
inline int cmd_evaluate(const RunConfig& cfg, const CliOptions& opt, std::ostream& out,
                        std::ostream& /*err*/) {
  const PhysicalConstants constants = cfg.constants();
  const StratifiedColumn column = cfg.column();
  const EvaluationGrid grid = cfg.grid();
  const SignConvention sign = cli_detail::effective_sign(opt);
  const VerticalCoefficient vc = vertical_coefficient(constants, closed_form_u(constants));
  const double kappa = vc.select(sign);

  std::vector<FlowField> flows;
  for (int i = 1; i <= column.layer_count(); ++i) {
    flows.push_back(make_closed_form_flow(constants, column.layer(i)));
  }

  std::string csv = "x[m],y[m],z[m],t[s],u[m/s],v[m/s],w[m/s],P[Pa],layer[-]\n";
  std::size_t rows = 0;
  grid.for_each([&](double x, double y, double z, double t) {
    const int i = layer_index_at(column, x, y, z, t);
    const auto& flow = flows[static_cast<std::size_t>(i - 1)];
    const double pressure = pressure_n_layer_formula(i, column, kappa, x, y, z, t);
    csv += format_g17(x) + "," + format_g17(y) + "," + format_g17(z) + "," + format_g17(t) +
           "," + format_g17(flow.u(x, y, z, t)) + "," + format_g17(flow.v(x, y, z, t)) + "," +
           format_g17(flow.w(x, y, z, t)) + "," + format_g17(pressure) + "," +
           std::to_string(i) + "\n";
    ++rows;
  });

  const auto path = cli_detail::prepare_output(opt, "evaluate.csv");
  cli_detail::write_file(path, csv);
  out << "wrote " << path.string() << " (" << rows << " rows, sign=" << to_string(sign)
      << ", kappa=" << format_g17(kappa) << ")\n";
  return 0;
}

/// `verify`: substitutes the closed-form solution into every governing
/// equation and boundary condition over the grid and reports residuals.
/// Exit status 0 only when every relative residual clears the tolerance.
inline int cmd_verify(const RunConfig& cfg, const CliOptions& opt, std::ostream& out,
                      std::ostream& /*err*/) {
  const PhysicalConstants constants = cfg.constants();
  const StratifiedColumn column = cfg.column();
  const EvaluationGrid grid = cfg.grid();
  const SignConvention sign = cli_detail::effective_sign(opt);
  const double tolerance = opt.tolerance.value_or(cfg.tolerance);
  const double u = closed_form_u(constants);
  const VerticalCoefficient vc = vertical_coefficient(constants, u);
  const double kappa = vc.select(sign);
  const int n = column.layer_count();

  std::vector<FlowField> flows;
  std::vector<PressureField> pressures;
  for (int i = 1; i <= n; ++i) {
    flows.push_back(make_closed_form_flow(constants, column.layer(i)));
    pressures.push_back(cli_detail::layer_pressure_field(column, i, kappa));
  }

  ReportDocument doc;
  doc.section("betaflow-verify");
  cli_detail::provenance(doc, cfg, constants, sign, vc);
  doc.kv("tolerance", tolerance);
  doc.kv("layers", n);

  std::vector<std::string> failing;
  doc.section("residuals");
  for (int i = 1; i <= n; ++i) {
    const auto& flow = flows[static_cast<std::size_t>(i - 1)];
    const auto& pressure = pressures[static_cast<std::size_t>(i - 1)];
    const double rho = column.layer(i).density;
    const std::string prefix = "layer" + std::to_string(i);
    cli_detail::residual_lines(doc, momentum_residual(flow, pressure, rho, constants, grid),
                               prefix, tolerance, failing);
    cli_detail::residual_lines(doc, divergence_residual(flow, grid), prefix, tolerance, failing);
    cli_detail::residual_lines(doc,
                               vorticity_residual(flow, column.layer(i).vorticity, grid),
                               prefix, tolerance, failing);
    cli_detail::residual_lines(
        doc, linear_system_residual(flow, column.layer(i).vorticity, constants, grid), prefix,
        tolerance, failing);
  }

  doc.section("boundary");
  const BoundarySampleSpec boundary_spec{grid.x, grid.y, grid.t};
  cli_detail::residual_lines(doc, boundary_residuals(column, flows, pressures, constants,
                                                     boundary_spec),
                             "", tolerance, failing);

  doc.section("y-boundedness");
  const auto bounded = y_boundedness_check(pressures.back(), column.surface(n), std::nullopt,
                                           cfg.y_span);
  const double growth_threshold =
      1e-12 * column.layer(n).density * constants.omega * constants.omega;
  const bool growth_ok = std::abs(bounded.linear_coeff) < growth_threshold;
  doc.kv("max_abs", bounded.max_abs);
  doc.kv("linear_coeff", bounded.linear_coeff);
  doc.kv("intercept", bounded.intercept);
  doc.kv("growth_threshold", growth_threshold);
  doc.kv("y_span", bounded.y_span);
  doc.kv("status", growth_ok ? "pass" : "FAIL");
  if (!growth_ok) failing.push_back("y-boundedness");

  doc.section("verdict");
  const bool pass = failing.empty();
  doc.kv("overall", pass ? "PASS" : "FAIL");
  std::string failed_list;
  for (const auto& f : failing) {
    if (!failed_list.empty()) failed_list += ",";
    failed_list += f;
  }
  doc.kv("failing", failing.empty() ? "none" : failed_list);

  const auto path = cli_detail::prepare_output(opt, "verify_report.txt");
  cli_detail::write_file(path, doc.text());
  out << doc.text();
  return pass ? 0 : 1;
}

/// `characteristics`: integrates curve bundles per layer, exports the samples
/// with their invariants and reports the worst invariant drift. Degenerate
/// layers (lambda2 + 2*omega = 0) are reported and skipped.
inline int cmd_characteristics(const RunConfig& cfg, const CliOptions& opt, std::ostream& out,
                               std::ostream& /*err*/) {
  const PhysicalConstants constants = cfg.constants();
  const StratifiedColumn column = cfg.column();
  const EvaluationGrid grid = cfg.grid();
  const SignConvention sign = cli_detail::effective_sign(opt);
  const VerticalCoefficient vc = vertical_coefficient(constants, closed_form_u(constants));
  const double drift_tolerance = opt.tolerance.value_or(1e-9);
  if (cfg.curves < 1) throw ConfigError(cfg.source_name + ": [characteristics] curves must be >= 1");
  if (cfg.steps < 1) throw ConfigError(cfg.source_name + ": [characteristics] steps must be >= 1");

  CurveSampleSpec spec;
  spec.x_range = {grid.x.min, grid.x.max};
  spec.y_range = {grid.y.min, grid.y.max};
  spec.z_range = {grid.z.min, grid.z.max};
  spec.curve_count = cfg.curves;
  spec.steps = cfg.steps;
  spec.s_span = cfg.s_end - cfg.s_begin;

  ReportDocument doc;
  doc.section("betaflow-characteristics");
  cli_detail::provenance(doc, cfg, constants, sign, vc);
  doc.kv("curves_per_layer", cfg.curves);
  doc.kv("steps", cfg.steps);
  doc.kv("s_begin", cfg.s_begin);
  doc.kv("s_end", cfg.s_end);
  doc.kv("drift_tolerance", drift_tolerance);

  std::string csv = "layer[-],curve[-],s[-],x[m],y[m],z[m],m[m/s],n[m/s]\n";
  bool pass = true;

  doc.section("layers");
  for (int i = 1; i <= column.layer_count(); ++i) {
    const Vorticity vort = column.layer(i).vorticity;
    const std::string prefix = "layer" + std::to_string(i);
    if (!(std::abs(characteristic_slope(vort, constants)) > 0.0)) {
      doc.line(prefix + ": degenerate (lambda2 + 2*omega = 0); curves skipped");
      continue;
    }
    double max_drift_m = 0.0, max_drift_n = 0.0;
    int curve_id = 0;
    for (const auto& seed : curve_seed_lattice(spec)) {
      const auto curve = integrate_characteristic(seed, vort, constants,
                                                  {cfg.s_begin, cfg.s_end}, {cfg.steps});
      const auto inv0 =
          invariants_at({curve.front().x, curve.front().y, curve.front().z}, vort, constants);
      for (const auto& p : curve.points) {
        const auto inv = invariants_at({p.x, p.y, p.z}, vort, constants);
        max_drift_m = std::max(max_drift_m,
                               std::abs(inv.m - inv0.m) / (1.0 + std::abs(inv0.m)));
        max_drift_n = std::max(max_drift_n,
                               std::abs(inv.n - inv0.n) / (1.0 + std::abs(inv0.n)));
        csv += std::to_string(i) + "," + std::to_string(curve_id) + "," + format_g17(p.s) +
               "," + format_g17(p.x) + "," + format_g17(p.y) + "," + format_g17(p.z) + "," +
               format_g17(inv.m) + "," + format_g17(inv.n) + "\n";
      }
      ++curve_id;
    }
    const bool ok = max_drift_m < drift_tolerance && max_drift_n < drift_tolerance;
    pass = pass && ok;
    doc.line(prefix + ": curves=" + std::to_string(curve_id) + " max_drift_m=" +
             format_g17(max_drift_m) + " max_drift_n=" + format_g17(max_drift_n) + " " +
             (ok ? "pass" : "FAIL"));
  }

  doc.section("verdict");
  doc.kv("overall", pass ? "PASS" : "FAIL");

  cli_detail::write_file(cli_detail::prepare_output(opt, "characteristics.csv"), csv);
  const auto path = cli_detail::prepare_output(opt, "characteristics_report.txt");
  cli_detail::write_file(path, doc.text());
  out << doc.text();
  return pass ? 0 : 1;
}

/// `converge`: runs the layered-pressure convergence study for the configured
/// surface family and reports observed sup differences against the bound.
inline int cmd_converge(const RunConfig& cfg, const CliOptions& opt, std::ostream& out,
                        std::ostream& /*err*/) {
  const PhysicalConstants constants = cfg.constants();
  const SignConvention sign = cli_detail::effective_sign(opt);
  const VerticalCoefficient vc = vertical_coefficient(constants, closed_form_u(constants));
  const double kappa = vc.select(sign);

  if (!cfg.family) throw ConfigError(cfg.source_name + ": [converge] family rule required");
  if (cfg.n_values.empty() || cfg.p_values.empty()) {
    throw ConfigError(cfg.source_name + ": [converge] n_values and p_values required");
  }
  if (!cfg.depth) throw ConfigError(cfg.source_name + ": [column] depth required for converge");
  double density = 0.0;
  if (cfg.family_density) {
    density = *cfg.family_density;
  } else if (!cfg.layer_configs.empty()) {
    density = cfg.layer_configs.front().density;
  } else {
    throw ConfigError(cfg.source_name + ": [converge] density required (no column layers to default from)");
  }

  ConvergenceSampleSpec spec;
  if (cfg.gx && cfg.gy && cfg.gt) {
    spec.x = *cfg.gx;
    spec.y = *cfg.gy;
    spec.t = *cfg.gt;
  }
  if (cfg.gz) spec.z = cfg.gz->min;

  const auto family = make_family(*cfg.family, *cfg.depth, density, cfg.atm_pressure);
  const auto study = convergence_study(family, cfg.n_values, cfg.p_values, kappa, spec);

  ReportDocument doc;
  doc.section("betaflow-converge");
  cli_detail::provenance(doc, cfg, constants, sign, vc);
  doc.kv("depth", *cfg.depth);
  doc.kv("density", density);
  doc.kv("atm_pressure", cfg.atm_pressure);

  doc.section("table");
  for (const auto& e : study.pairs) {
    doc.line("n=" + std::to_string(e.n) + " p=" + std::to_string(e.p) + " observed_sup=" +
             format_g17(e.observed_sup) + " bound=" + format_g17(e.bound) + " " +
             (e.bound_satisfied ? "pass" : "FAIL"));
  }

  doc.section("summary");
  doc.kv("sup_density", study.sup_density);
  doc.kv("densities_bounded", study.densities_bounded);
  doc.kv("surfaces_uniformly_convergent", study.surfaces_uniformly_convergent);
  doc.kv("bounds_all_satisfied", study.bounds_all_satisfied);
  doc.kv("sup_monotone_in_n", study.sup_monotone_in_n);

  const bool pass = study.bounds_all_satisfied && study.sup_monotone_in_n;
  doc.section("verdict");
  doc.kv("overall", pass ? "PASS" : "FAIL");

  const auto path = cli_detail::prepare_output(opt, "converge_report.txt");
  cli_detail::write_file(path, doc.text());
  out << doc.text();
  return pass ? 0 : 1;
}

}  // namespace betaflow
