#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "../tests/benchmark_params.hpp"
#include "qtoa/curve.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"
#include "qtoa/scenario.hpp"

using namespace qtoa;
using doctest::Approx;

namespace {

std::string data_file(const char* name) {
  return std::string(QTOA_TEST_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const char* tag) {
  auto d = std::filesystem::temp_directory_path() / (std::string("qtoa_test_") + tag);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("the benchmark config file reproduces the in-code parameters exactly") {
  const ScenarioConfig cfg = parse_config_file(data_file("benchmark.cfg"));

  CHECK(cfg.mode == "curve");
  CHECK(cfg.path == ProbabilityPath::closed_general);

  REQUIRE(cfg.masses.size() == 2);
  CHECK(cfg.masses[0] == bench::mass(bench::energy1));
  CHECK(cfg.masses[1] == bench::mass(bench::energy2));
  CHECK(cfg.momentum == bench::momentum);
  CHECK(cfg.has_angle);
  CHECK(cfg.mixing_angle == bench::mixing_angle);
  CHECK(cfg.sigma == bench::sigma);

  REQUIRE(cfg.channels.size() == 1);
  const DetectionChannel& ch = cfg.channels.front().channel;
  const DetectionChannel ref = bench::channel();
  CHECK(cfg.channels.front().weight == 1.0);
  CHECK(ch.epsilon_th == ref.epsilon_th);
  REQUIRE(ch.product_masses.size() == 2);
  CHECK(ch.product_masses[0] == bench::product_mass);
  CHECK(ch.product_masses[1] == bench::product_mass);
  CHECK(ch.delta == ref.delta);
  CHECK(ch.tau_dec == ref.tau_dec);

  CHECK(cfg.L_min == bench::L_min);
  CHECK(cfg.span_wavelengths == 3.0);
  CHECK(cfg.L_points == 181);

  const MassSpectrum spec = scenario_spectrum(cfg);
  const MassSpectrum want = bench::spectrum();
  CHECK(spec[0].mass == want[0].mass);
  CHECK(spec[1].mass == want[1].mass);
  CHECK(spec[0].momentum == want[0].momentum);

  const WavePacketState state = scenario_state(cfg);
  CHECK(state.sigma == bench::sigma);
  CHECK(state.production_flavor == 0);

  const auto grid = scenario_distance_grid(cfg);
  REQUIRE(grid.size() == 181);
  CHECK(grid.front() == bench::L_min);
  CHECK(grid.back() ==
        Approx(bench::L_min + 3.0 * bench::wavelength()).epsilon(1e-14));
}

TEST_CASE("a JSON config with the same layout parses to the same scenario") {
  const std::string json = R"({
    "run": {"mode": "curve", "path": "closed-general"},
    "spectrum": {"energies": ["5.0 eV", "4.98 eV"], "momentum": "4.0 eV"},
    "mixing": {"angle": "0.78539816339744828"},
    "state": {"sigma": "1.6 eV^-1"},
    "channel": {
      "epsilon_th": "4.0 eV",
      "product_masses": ["1e6 eV", "1e6 eV"],
      "delta": "0.054772255750516613 eV^-1",
      "tau_dec": "3000.0 eV^-1"
    },
    "geometry": {"L_min": "250.0 eV^-1", "span_wavelengths": 3, "L_points": 181}
  })";
  const ScenarioConfig a = parse_config_text(json);
  const ScenarioConfig b = parse_config_file(data_file("benchmark.cfg"));
  CHECK(a.mode == b.mode);
  CHECK(a.path == b.path);
  CHECK(a.masses == b.masses);
  CHECK(a.momentum == b.momentum);
  CHECK(a.mixing_angle == b.mixing_angle);
  CHECK(a.sigma == b.sigma);
  REQUIRE(a.channels.size() == b.channels.size());
  CHECK(a.channels[0].channel.delta == b.channels[0].channel.delta);
  CHECK(a.channels[0].channel.tau_dec == b.channels[0].channel.tau_dec);
  CHECK(a.L_min == b.L_min);
  CHECK(a.L_points == b.L_points);
}

TEST_CASE("malformed syntax reports the offending line") {
  CHECK_THROWS_AS(parse_config_text("[run]\nmode = curve\nmode = toa\n"), ParseError);
  try {
    parse_config_text("[run]\nmode = curve\nmode = toa\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_config_text("[run\nmode = curve\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("{ \"run\": "), ParseError);
}

TEST_CASE("validation problems are collected into one report") {
  // unknown key
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nmode = wavelength\nfrobnicate = 1\n"),
                       doctest::Contains("frobnicate"), ValidationError);
  // unsupported mode
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nmode = banana\n"),
                       doctest::Contains("mode"), ValidationError);
  // masses and energies are mutually exclusive
  const std::string both =
      "[run]\nmode = curve\npath = closed-simplified\n"
      "[spectrum]\nmasses = 3.0 eV, 2.9 eV\nenergies = 5.0 eV, 4.98 eV\nmomentum = 4.0 eV\n";
  CHECK_THROWS_AS(parse_config_text(both), ValidationError);
  // wrong dimension on a quantity
  const std::string bad_unit =
      "[run]\nmode = wavelength\n[wavelength]\neth = 1.0 m\n";
  CHECK_THROWS_WITH_AS(parse_config_text(bad_unit), doctest::Contains("eth"), ValidationError);
  // energy below the shared momentum
  const std::string shallow =
      "[run]\nmode = curve\npath = closed-simplified\n"
      "[spectrum]\nenergies = 3.0 eV\nmomentum = 4.0 eV\n"
      "[mixing]\nidentity = 1\n[state]\nsigma = 1.6 eV^-1\n"
      "[channel]\nepsilon_th = 0.0 eV\nproduct_masses = 1e6 eV\n"
      "delta = 0.05 eV^-1\ntau_dec = 3000 eV^-1\n"
      "[geometry]\nL_min = 10 eV^-1\nL_max = 20 eV^-1\n";
  CHECK_THROWS_AS(parse_config_text(shallow), ValidationError);
}

TEST_CASE("overrides lay flag values over the file") {
  const auto cfg = parse_config_file(data_file("benchmark.cfg"),
                                     {{"geometry.L_points", "97"}, {"run.path", "numeric"}});
  CHECK(cfg.L_points == 97);
  CHECK(cfg.path == ProbabilityPath::numeric);
  CHECK(cfg.L_min == bench::L_min);  // untouched keys survive
  CHECK_THROWS_AS(parse_config_file(data_file("benchmark.cfg"), {{"nonsense.key", "1"}}),
                  ValidationError);
}

TEST_CASE("a wavelength run writes one deterministic CSV") {
  const ScenarioConfig cfg = parse_config_text(
      "[run]\nmode = wavelength\nformat = csv\nprefix = wl\n"
      "[wavelength]\nemax_ratio = 100\npoints = 64\n");
  const auto dir_a = fresh_dir("wl_a");
  const auto dir_b = fresh_dir("wl_b");
  const RunOutputs out_a = run_scenario(cfg, dir_a.string());
  const RunOutputs out_b = run_scenario(cfg, dir_b.string());
  REQUIRE(out_a.files.size() == 1);
  const std::string text = slurp(out_a.files.front());
  CHECK(text.substr(0, text.find('\n')) == "E_over_eth,standard,factor_two,threshold");
  CHECK(text == slurp(out_b.files.front()));
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("a closed-form probability run carries fit metrics") {
  const auto cfg = parse_config_file(
      data_file("benchmark.cfg"),
      {{"run.path", "closed-simplified"}, {"geometry.L_points", "33"}, {"run.format", "both"}});
  const auto dir = fresh_dir("curve");
  const RunOutputs out = run_scenario(cfg, dir.string());
  CHECK(out.files.size() >= 2);  // CSV plus at least one JSON
  for (const auto& f : out.files) CHECK(std::filesystem::exists(f));
  REQUIRE(out.metrics.count("k_fit") == 1);
  CHECK(out.metrics.at("k_fit") == Approx(bench::wavenumber()).epsilon(0.01));
  // the benchmark packets spread noticeably over the flight: the run says so
  CHECK(std::find(out.flags.begin(), out.flags.end(), "dispersive-regime") != out.flags.end());
  std::filesystem::remove_all(dir);
}

TEST_CASE("curve containers enforce the grid contract") {
  Curve bad;
  bad.x = {0.0, 1.0, 1.0};
  bad.y = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(validate_curve(bad), GridMismatch);
  bad.x = {0.0, 1.0};
  CHECK_THROWS_AS(validate_curve(bad), GridMismatch);  // size mismatch
  CHECK_THROWS_AS(validate_curve(Curve{}), GridMismatch);
}

TEST_CASE("normalization rescales to a unit integral and renames the model") {
  Curve c;
  c.x = linspace(0.0, 4.0, 81);
  c.y.resize(c.x.size());
  for (size_t i = 0; i < c.x.size(); ++i) c.y[i] = 2.0 + std::cos(c.x[i]);
  c.meta.model = "toy";
  const Curve n = normalized(c);
  CHECK(simpson(n.x, n.y) == Approx(1.0).epsilon(1e-14));
  CHECK(n.meta.model == "toy-normalized");

  Curve zero;
  zero.x = linspace(0.0, 1.0, 11);
  zero.y.assign(11, 0.0);
  CHECK_THROWS_AS(normalized(zero), NumericError);
}

TEST_CASE("grid builders pin their endpoints") {
  const auto lin = linspace(2.0, 7.0, 11);
  REQUIRE(lin.size() == 11);
  CHECK(lin.front() == 2.0);
  CHECK(lin.back() == 7.0);
  CHECK(lin[5] == Approx(4.5).epsilon(1e-15));

  const auto log = logspace(1.0, 1e6, 7);
  REQUIRE(log.size() == 7);
  CHECK(log.front() == 1.0);
  CHECK(log.back() == 1e6);
  CHECK(log[3] == Approx(1000.0).epsilon(1e-12));

  CHECK_THROWS_AS(linspace(1.0, 1.0, 5), ValidationError);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(logspace(0.0, 1.0, 5), ValidationError);
}

TEST_CASE("CSV output shares one x column across models") {
  Curve a, b;
  a.x = b.x = linspace(0.0, 1.0, 3);
  a.y = {1.0, 2.0, 3.0};
  b.y = {4.0, 5.0, 6.0};
  a.meta = {"x", "y", AxisKind::dimensionless, "alpha", {}};
  b.meta = {"x", "y", AxisKind::dimensionless, "beta", {}};
  const auto dir = fresh_dir("csv");
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "pair.csv").string();
  write_csv(path, {a, b});
  const std::string text = slurp(path);
  CHECK(text.substr(0, text.find('\n')) == "x,alpha,beta");
  CHECK(text.find("0.5,2,5\n") != std::string::npos);

  Curve other = b;
  other.x = linspace(0.0, 2.0, 3);
  CHECK_THROWS_AS(write_csv(path, {a, other}), GridMismatch);
  std::filesystem::remove_all(dir);
}
