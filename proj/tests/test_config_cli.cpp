#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "betaflow/cli.hpp"
#include "betaflow/config.hpp"
#include "betaflow/report.hpp"
#include "betaflow/stratification.hpp"
#include "test_support.hpp"

using namespace betaflow;

namespace {

const std::string kBaseConfig = R"(# test column
[constants]
omega = 7.29e-5
beta = standard
radius = 6.378e6
gravity = 9.81

[column]
depth = 100
atm_pressure = 101325
layer = 1000 0 0 0
layer = 900 0 0 0
surface = const -10
surface = const 0

[grid]
x = -1e5 1e5 3
y = -1e5 1e5 3
z = -90 -2 4
t = 0 3600 2

[verify]
tolerance = 1e-8
y_span = 1e6

[characteristics]
curves = 16
steps = 64
s_span = 0 1

[converge]
family = geometric -1 0.5
n_values = 2 4 8
p_values = 1 2 4
density = 1000
)";

std::filesystem::path test_dir() {
  const auto dir = std::filesystem::current_path() / "cli_test_out";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = test_dir() / name;
  std::ofstream f(path, std::ios::binary);
  f << text;
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("full config parses into typed blocks") {
  const auto cfg = parse_run_config(kBaseConfig, "base.ini");
  CHECK(cfg.omega == 7.29e-5);
  CHECK_FALSE(cfg.beta.has_value());
  CHECK(cfg.constants().beta_derived);
  const auto col = cfg.column();
  CHECK(col.layer_count() == 2);
  CHECK(col.layer(2).density == 900.0);
  CHECK(col.surface(1)(0, 0, 0) == -10.0);
  const auto grid = cfg.grid();
  CHECK(grid.size() == 3 * 3 * 4 * 2);
  REQUIRE(cfg.family.has_value());
  CHECK(cfg.family->kind == FamilySpec::Kind::geometric);
  CHECK(cfg.n_values == std::vector<int>{2, 4, 8});
  CHECK(cfg.p_values == std::vector<int>{1, 2, 4});
}

TEST_CASE("explicit beta and surface expressions parse") {
  const std::string text = R"(
[constants]
beta = 2.1e-11

[column]
depth = 50
layer = 1000 0 0 0
surface = sin -5 2 1e-4 5e-5 0.1
)";
  const auto cfg = parse_run_config(text, "x.ini");
  REQUIRE(cfg.beta.has_value());
  CHECK(*cfg.beta == 2.1e-11);
  const auto col = cfg.column();
  CHECK(col.surface(1)(0, 0, 0) == Catch::Approx(-5.0));
  REQUIRE(col.surface(1).y_slope_bound.has_value());
  CHECK(*col.surface(1).y_slope_bound == Catch::Approx(2.0 * 5e-5));
}

TEST_CASE("config diagnostics carry file, line and key") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_run_config(text, "bad.ini");
      FAIL("expected ConfigError for: " + needle);
    } catch (const ConfigError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(std::string(e.what()).find("bad.ini:") != std::string::npos);
    }
  };
  expect_error("[grid]\nfoo = 1\n", "foo");
  expect_error("[nosuch]\n", "unknown section");
  expect_error("[constants]\nomega = 1x\n", "expected a number");
  expect_error("[constants]\nomega = 1\nomega = 2\n", "duplicate key");
  expect_error("[column]\nlayer = 1000 0 0\n", "expected '<density>");
  expect_error("[column]\nsurface = parabola 1\n", "unknown surface kind");
  expect_error("[converge]\nfamily = geometric -1 2\n", "ratio");
  expect_error("[characteristics]\ns_span = 1\n", "expected '<s_begin> <s_end>'");
  expect_error("omega = 1\n", "before any [section]");
  expect_error("[constants]\nomega\n", "expected 'key = value'");
}

TEST_CASE("column and grid accessors validate completeness") {
  const auto no_grid = parse_run_config("[column]\ndepth = 10\nlayer = 1000 0 0 0\nsurface = const 0\n", "g.ini");
  CHECK_THROWS_AS(no_grid.grid(), ConfigError);
  const auto mismatched = parse_run_config(
      "[column]\ndepth = 10\nlayer = 1000 0 0 0\nlayer = 900 0 0 0\nsurface = const 0\n",
      "m.ini");
  CHECK_THROWS_AS(mismatched.column(), ConfigError);
}

TEST_CASE("hash and float formatting are stable") {
  CHECK(fnv1a64("abc") == 0xe71fa2190541574bull);
  CHECK(to_hex(fnv1a64("abc")) == "e71fa2190541574b");
  for (double v : {0.1, -2.2859830667920978e-11, 1e300, 9.81}) {
    CHECK(std::stod(format_g17(v)) == v);
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "--config", (test_dir() / "absent.ini").string()}).code == 2);
  CHECK(run({"verify", "--config", "x", "--sign", "sideways"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("evaluate exports one row per grid point with constant zonal speed") {
  const std::string config = write_config("eval_single.ini", R"(
[column]
depth = 100
atm_pressure = 101325
layer = 1000 0 0 0
surface = const 0

[grid]
x = 0 1000 2
y = 0 1000 2
z = -50 -10 2
t = 0 0 1
)");
  const auto out_dir = (test_dir() / "eval_single").string();
  const auto result = run({"evaluate", "--config", config, "--out", out_dir});
  REQUIRE(result.code == 0);
  const auto csv_bytes = slurp(std::filesystem::path(out_dir) / "evaluate.csv");
  REQUIRE(run({"evaluate", "--config", config, "--out", out_dir}).code == 0);
  CHECK(slurp(std::filesystem::path(out_dir) / "evaluate.csv") == csv_bytes);
  const auto lines = split_lines(csv_bytes);
  REQUIRE(lines.size() == 9);  // header + 2*2*2*1 rows
  CHECK(lines[0].find("x[m]") == 0);
  const auto first_u = split_csv(lines[1])[4];
  for (std::size_t i = 2; i < lines.size(); ++i) {
    CHECK(split_csv(lines[i])[4] == first_u);  // constant u column
  }
  CHECK(std::stod(first_u) == Catch::Approx(-232.4781).epsilon(1e-9));
}

TEST_CASE("evaluate switches the pressure branch across the interface") {
  const std::string config = write_config("eval_two.ini", R"(
[column]
depth = 100
atm_pressure = 101325
layer = 1000 0 0 0
layer = 900 0 0 0
surface = const -10
surface = const 0

[grid]
x = 0 0 1
y = 0 0 1
z = -18 -2 5
t = 0 0 1
)");
  const auto out_dir = (test_dir() / "eval_two").string();
  REQUIRE(run({"evaluate", "--config", config, "--out", out_dir}).code == 0);
  const auto lines = split_lines(slurp(std::filesystem::path(out_dir) / "evaluate.csv"));
  REQUIRE(lines.size() == 6);

  const auto cfg = load_run_config(config);
  const auto col = cfg.column();
  const auto c = cfg.constants();
  const double kappa = vertical_coefficient(c, closed_form_u(c)).oracle;

  bool saw_layer1 = false, saw_layer2 = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv(lines[i]);
    REQUIRE(cells.size() == 9);
    const double z = std::stod(cells[2]);
    const double pressure = std::stod(cells[7]);
    const int layer = std::stoi(cells[8]);
    CHECK(layer == layer_index_at(col, 0.0, 0.0, z, 0.0));
    saw_layer1 |= layer == 1;
    saw_layer2 |= layer == 2;
    const double expected = pressure_n_layer_formula(layer, col, kappa, 0.0, 0.0, z, 0.0);
    CHECK(bftest::rel_diff(pressure, expected) < 1e-12);
  }
  CHECK(saw_layer1);
  CHECK(saw_layer2);
}

TEST_CASE("evaluate rejects an empty grid range") {
  const std::string config = write_config("eval_bad.ini", R"(
[column]
depth = 100
layer = 1000 0 0 0
surface = const 0

[grid]
x = 0 1000 0
y = 0 1000 2
z = -50 -10 2
t = 0 0 1
)");
  const auto result = run({"evaluate", "--config", config, "--out", (test_dir() / "eb").string()});
  CHECK(result.code == 2);
  CHECK(result.err.find("count") != std::string::npos);
}

TEST_CASE("verify is deterministic and writes the same report it prints") {
  const std::string config = write_config("verify.ini", kBaseConfig);
  const auto out_dir = (test_dir() / "verify_det").string();
  const auto first = run({"verify", "--config", config, "--out", out_dir});
  const auto second = run({"verify", "--config", config, "--out", out_dir});
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  CHECK(first.out == second.out);
  CHECK(slurp(std::filesystem::path(out_dir) / "verify_report.txt") == first.out);
  CHECK(first.out.find("overall = PASS") != std::string::npos);
  CHECK(first.out.find("kappa_paper") != std::string::npos);
  CHECK(first.out.find("kappa_oracle") != std::string::npos);
}

TEST_CASE("verify flags declared vorticity on the irrotational solution") {
  std::string text = kBaseConfig;
  const auto pos = text.find("layer = 1000 0 0 0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("layer = 1000 0 0 0").size(), "layer = 1000 0 0.1 0");
  const std::string config = write_config("verify_vort.ini", text);
  const auto result = run({"verify", "--config", config, "--out", (test_dir() / "vv").string()});
  CHECK(result.code == 1);
  CHECK(result.out.find("layer1.vorticity-consistency-y") != std::string::npos);
  CHECK(result.out.find("overall = FAIL") != std::string::npos);
}

TEST_CASE("paper sign fails verification; oracle sign passes") {
  const std::string config = write_config("verify_sign.ini", kBaseConfig);
  const auto oracle = run({"verify", "--config", config, "--out", (test_dir() / "vs_o").string(),
                           "--sign", "oracle"});
  CHECK(oracle.code == 0);
  const auto paper = run({"verify", "--config", config, "--out", (test_dir() / "vs_p").string(),
                          "--sign", "paper"});
  CHECK(paper.code == 1);
  CHECK(paper.out.find("momentum-z") != std::string::npos);
  CHECK(paper.out.find("FAIL") != std::string::npos);
}

TEST_CASE("characteristics command reports drifts and degeneracies") {
  const std::string config = write_config("chars.ini", kBaseConfig);
  const auto out_dir = (test_dir() / "chars").string();
  const auto result = run({"characteristics", "--config", config, "--out", out_dir});
  REQUIRE(result.code == 0);
  CHECK(result.out.find("layer1: curves=16") != std::string::npos);
  CHECK(result.out.find("overall = PASS") != std::string::npos);
  const auto csv = slurp(std::filesystem::path(out_dir) / "characteristics.csv");
  CHECK(csv.find("layer[-],curve[-]") == 0);

  // lambda2 = -2*omega exactly: the layer is reported degenerate, not fatal
  std::string degen = kBaseConfig;
  const auto pos = degen.find("layer = 900 0 0 0");
  REQUIRE(pos != std::string::npos);
  degen.replace(pos, std::string("layer = 900 0 0 0").size(), "layer = 900 0 -1.458e-4 0");
  const std::string degen_config = write_config("chars_degen.ini", degen);
  const auto degen_result =
      run({"characteristics", "--config", degen_config, "--out", (test_dir() / "cd").string()});
  CHECK(degen_result.code == 0);
  CHECK(degen_result.out.find("layer2: degenerate") != std::string::npos);
}

TEST_CASE("converge command emits the bound table and passes") {
  const std::string config = write_config("conv.ini", kBaseConfig);
  const auto out_dir = (test_dir() / "conv").string();
  const auto result = run({"converge", "--config", config, "--out", out_dir});
  REQUIRE(result.code == 0);
  CHECK(result.out.find("n=2 p=1 observed_sup=") != std::string::npos);
  CHECK(result.out.find("bounds_all_satisfied = true") != std::string::npos);
  CHECK(result.out.find("sup_monotone_in_n = true") != std::string::npos);
  CHECK(result.out.find("overall = PASS") != std::string::npos);
  const auto again = run({"converge", "--config", config, "--out", out_dir});
  CHECK(again.out == result.out);
}

TEST_CASE("converge rejects a family that breaks the layer ordering") {
  // depth 0.5 puts the bottom above eta_1 = -1
  std::string text = kBaseConfig;
  const auto pos = text.find("depth = 100");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("depth = 100").size(), "depth = 0.5");
  const std::string config = write_config("conv_bad.ini", text);
  const auto result = run({"converge", "--config", config, "--out", (test_dir() / "cb").string()});
  CHECK(result.code == 2);
  CHECK(result.err.find("not strictly ordered") != std::string::npos);
  CHECK(result.err.find("eta_1") != std::string::npos);
}

TEST_CASE("shipped default config verifies clean") {
  const std::string shipped = std::string(BETAFLOW_SOURCE_DIR) + "/configs/default.ini";
  const auto result =
      run({"verify", "--config", shipped, "--out", (test_dir() / "shipped").string()});
  CHECK(result.code == 0);
  CHECK(result.out.find("overall = PASS") != std::string::npos);
}
